#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Configuration, workload synthesis, end-to-end runs, sweeps and
reports.'''
from .config import RunConfig, load_config, default_config, presets
from .synth import synth_workload, synth_bimodal
from .run import run, simulate_linear_layer, simulate_attention_layer
from .report import LayerReport, SimReport
from .sweep import SweepResult, sweep

__all__ = ['RunConfig', 'load_config', 'default_config', 'presets',
           'synth_workload', 'synth_bimodal', 'run', 'simulate_linear_layer',
           'simulate_attention_layer', 'LayerReport', 'SimReport',
           'SweepResult', 'sweep']
