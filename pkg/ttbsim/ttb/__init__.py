#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Spike tensors, token-time bundle packing and bundle sparsity metrics.'''
from .tensor import SpikeTensor, read_ttbs, write_ttbs
from .grid import BundleShape, TTBGrid, pack_ttb, bundle_tag
from .metrics import SparsityMetrics, sparsity_metrics

__all__ = ['SpikeTensor', 'read_ttbs', 'write_ttbs', 'BundleShape',
           'TTBGrid', 'pack_ttb', 'bundle_tag', 'SparsityMetrics',
           'sparsity_metrics']
