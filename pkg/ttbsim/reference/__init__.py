#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Bit-exact functional model of spiking transformer inference.'''
from .lif import LifParams, LifState, lif_step, lif_layer
from .config import ModelConfig, ROLES
from .weights import BlockWeights, read_ttbw, write_ttbw, save_weights, \
    load_weights
from .linear import linear_project
from .attention import SsaTrace, ssa_forward, attention_scores
from .block import LayerTrace, BlockTrace, block_forward, model_forward
from .flops import FlopsBreakdown, flops_breakdown

__all__ = ['LifParams', 'LifState', 'lif_step', 'lif_layer', 'ModelConfig',
           'ROLES', 'BlockWeights', 'read_ttbw', 'write_ttbw',
           'save_weights', 'load_weights', 'linear_project', 'SsaTrace',
           'ssa_forward', 'attention_scores', 'LayerTrace', 'BlockTrace',
           'block_forward', 'model_forward', 'FlopsBreakdown',
           'flops_breakdown']
