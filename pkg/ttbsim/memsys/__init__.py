#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Memory hierarchy: DRAM, the weight and TTB global buffers and core
registers, with event counting, energy accounting and tile planning.'''
from .config import MemConfig, ENERGY_KINDS, load_energy_table
from .memsys import (MemorySystem, EnergyReport, overlap, pipeline_latency,
                     serial_latency)
from .tiling import TensorFootprint, TilePlan, plan_tiles, record_plan

__all__ = ['MemConfig', 'ENERGY_KINDS', 'load_energy_table', 'MemorySystem',
           'EnergyReport', 'overlap', 'pipeline_latency', 'serial_latency',
           'TensorFootprint', 'TilePlan', 'plan_tiles', 'record_plan']
