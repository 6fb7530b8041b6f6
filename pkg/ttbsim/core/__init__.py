#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Cycle and energy models of the dense, sparse and attention cores.'''
from .stats import CoreStats
from .dense import DenseCoreConfig, simulate_dense, dense_cycles, \
    dense_port_bits
from .sparse import SparseCoreConfig, simulate_sparse, \
    estimate_sparse_cycles, lpt_schedule
from .attention import AttnCoreConfig, simulate_mode1, simulate_mode2

__all__ = ['CoreStats', 'DenseCoreConfig', 'simulate_dense', 'dense_cycles',
           'dense_port_bits', 'SparseCoreConfig', 'simulate_sparse',
           'estimate_sparse_cycles', 'lpt_schedule', 'AttnCoreConfig',
           'simulate_mode1', 'simulate_mode2']
