#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Error-constrained pruning of query and key bundle rows on a Model-3
sized block: keep fractions, attention work and DRAM traffic per
threshold.'''
from ttbsim.harness import load_config, sweep

cfg = load_config('configs/model3.json')
result = sweep(cfg, 'theta_p', [0, 2, 4, 6, 8])
for value, r in zip(result.values, result.reports):
    attn = r.layer('block0.attn')
    print('theta_p=%d keep_q=%.3f keep_k=%.3f MACs=%d DRAM=%d B' % (
        value, attn.keep_q, attn.keep_k,
        attn.stats['attention'].mac_equivalents,
        attn.dram['read_bytes'] + attn.dram['write_bytes']
    ))
