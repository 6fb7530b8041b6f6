#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Cost models of the spike generator and the stratifier unit.'''
from collections import namedtuple
from ttbsim.exceptions import ConfigurationError
from ttbsim.core.stats import CoreStats


class SpikeGenConfig(namedtuple('SpikeGenConfig', ['lanes', 'e_update'])):
    '''Neuron update lanes and energy per neuron update (pJ).'''

    def __new__(cls, lanes=512, e_update=0.1):
        if lanes < 1:
            raise ConfigurationError('spikegen.lanes must be >= 1.')
        return super().__new__(cls, int(lanes), float(e_update))


class StratifierConfig(namedtuple('StratifierConfig', [
    'comparators', 'e_compare'
])):
    '''Tag comparators of the stratifier and energy per comparison (pJ).'''

    def __new__(cls, comparators=32, e_compare=0.01):
        if comparators < 1:
            raise ConfigurationError('stratifier.comparators must be >= 1.')
        return super().__new__(cls, int(comparators), float(e_compare))


def spikegen_cost(T, N, d_out, cfg):
    '''Merge the partial sums of both cores and update the neurons of one
    layer, ``lanes`` neurons per cycle and time point.'''
    updates = T * N * d_out
    return CoreStats(
        cycles=T * -(-N * d_out // cfg.lanes),
        register_accesses=updates,
        energy={'spikegen': updates * cfg.e_update},
    )


def stratifier_cost(bundles, features, cfg):
    '''One threshold comparison per feature over its bundle tags.'''
    compares = bundles * features
    return CoreStats(
        cycles=-(-compares // cfg.comparators),
        energy={'stratifier': compares * cfg.e_compare},
    )
