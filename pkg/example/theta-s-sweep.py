#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Energy-delay product as a function of the stratification threshold.'''
from ttbsim.harness import load_config, sweep

cfg = load_config('configs/bimodal.json')
result = sweep(cfg, 'theta_s', range(0, 31, 2), progress=True)
table = result.table()
print(table[['theta_s', 'cycles', 'energy_pj', 'edp']].to_string(index=False))
best = table.loc[table['edp'].idxmin(), 'theta_s']
print(f'lowest EDP at theta_s = {best}')
