#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Compare the heterogeneous dense/sparse datapath against a dense-only
baseline on a workload whose features are either mostly silent or mostly
firing.'''
from ttbsim.harness import load_config, run
from ttbsim.util.printer import print_layers

cfg = load_config({
    'model': {'T': 4, 'N': 128, 'D': 64},
    'bundle': {'shape': '4x5'},
    'workload': {'kind': 'bimodal'},
    'run': {'layers': ['q', 'k', 'v']},
})

het = run(cfg)
dense = run(cfg.updated({'run.mode': 'dense_only'}))

print_layers(het)
print_layers(dense)
print('speed-up: %.2fx' % (dense.cycles / het.cycles))
print('energy saving: %.2fx' % (dense.energy_pj / het.energy_pj))
