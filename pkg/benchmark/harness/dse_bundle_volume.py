#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Bundle volume exploration on the default synthetic workload. Weight buffer
reads fall and activation traffic grows with the volume, so the total energy
bottoms out at a moderate volume.'''
import numpy as np
from ttbsim.harness import load_config, sweep

VOLUMES = [2, 4, 8, 14, 20]


def test_bundle_volume(benchmark):
    cfg = load_config({})

    result = benchmark.pedantic(sweep, args=(cfg, 'bundle_volume', VOLUMES),
                                iterations=1, rounds=1)

    assert(not result.failed)
    table = result.table()
    energy = table['energy_pj'].to_numpy()
    best = VOLUMES[int(np.argmin(energy))]
    benchmark.extra_info['energy_pj'] = dict(zip(VOLUMES, energy.tolist()))
    benchmark.extra_info['weight_glb_reads'] = dict(
        zip(VOLUMES, table['weight_glb_reads'].tolist())
    )
    benchmark.extra_info['best_volume'] = best
    print(table.to_string(index=False))
    print(f'lowest energy at volume {best}')
    assert(4 <= best <= 8)
