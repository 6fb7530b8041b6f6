#!/usr/bin/env python
# -*- coding: utf-8 -*-
from .ecp import EcpConfig, OpCount, PruneMask, row_active_counts, \
    ecp_prune, prune_heads, pruned_attention, error_bound_check

__all__ = ['EcpConfig', 'OpCount', 'PruneMask', 'row_active_counts',
           'ecp_prune', 'prune_heads', 'pruned_attention',
           'error_bound_check']
