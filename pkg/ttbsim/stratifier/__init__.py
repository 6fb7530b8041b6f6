#!/usr/bin/env python
# -*- coding: utf-8 -*-
from .stratifier import Stratification, StratPolicy, stratify, \
    choose_theta_s, merge_and_fire, bundle_work
from .spikegen import SpikeGenConfig, StratifierConfig, spikegen_cost, \
    stratifier_cost

__all__ = ['Stratification', 'StratPolicy', 'stratify', 'choose_theta_s',
           'merge_and_fire', 'bundle_work', 'SpikeGenConfig',
           'StratifierConfig', 'spikegen_cost', 'stratifier_cost']
