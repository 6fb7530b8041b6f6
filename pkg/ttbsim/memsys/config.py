#!/usr/bin/env python
# -*- coding: utf-8 -*-
import json
import os
from dataclasses import dataclass, field
from typing import Dict
from ttbsim.exceptions import ConfigurationError

ENERGY_KINDS = ('dram_read', 'dram_write', 'weight_glb_read',
                'weight_glb_write', 'ttb_glb_read', 'ttb_glb_write',
                'register_access')
'''Event kinds of the energy table. DRAM events count bytes, buffer events
count port words and register events count accesses.'''

CALIBRATION = os.path.join(os.path.dirname(__file__), 'calibration.json')


def load_energy_table(path=CALIBRATION):
    '''Read a JSON object mapping every event kind to picojoules per
    event.'''
    with open(path) as f:
        table = json.load(f)
    return check_energy_table(table)


def check_energy_table(table):
    if not isinstance(table, dict):
        raise ConfigurationError('The energy table must be a JSON object.')
    unknown = set(table) - set(ENERGY_KINDS)
    if unknown:
        raise ConfigurationError(
            f'Unknown energy table entries {sorted(unknown)}.'
        )
    missing = set(ENERGY_KINDS) - set(table)
    if missing:
        raise ConfigurationError(
            f'Missing energy table entries {sorted(missing)}.'
        )
    for k, v in table.items():
        if not isinstance(v, (int, float)) or v < 0:
            raise ConfigurationError(
                f'Energy of {k} must be a non-negative number, got {v!r}.'
            )
    return {k: float(table[k]) for k in ENERGY_KINDS}


@dataclass(frozen=True)
class MemConfig:
    '''Three-level memory hierarchy.

    Parameters
    ----------
    clock_mhz: float
        Core clock.
    dram_bandwidth: float
        DRAM bytes per core cycle; 76.8 GB/s at 500 MHz by default.
    dram_power_mw: float
        DRAM power, charged over the whole run time.
    weight_glb_bytes: int
        Weight global buffer capacity.
    weight_port_bits: int
        Width of the weight buffer read/write port.
    ttb_glb_bytes: int
        Capacity of one bank of the activation (TTB) buffer.
    ttb_glb_banks: int
        Banks of the TTB buffer, used as ping-pong halves.
    ttb_word_bits: int
        Word width of the TTB buffer.
    energy: dict
        Picojoules per event kind.
    '''
    clock_mhz: float = 500.0
    dram_bandwidth: float = 153.6
    dram_power_mw: float = 323.9
    weight_glb_bytes: int = 144 * 1024
    weight_port_bits: int = 512
    ttb_glb_bytes: int = 12 * 1024
    ttb_glb_banks: int = 2
    ttb_word_bits: int = 64
    energy: Dict[str, float] = field(default_factory=load_energy_table)

    def __post_init__(self):
        for name in ('clock_mhz', 'dram_bandwidth', 'weight_glb_bytes',
                     'weight_port_bits', 'ttb_glb_bytes', 'ttb_glb_banks',
                     'ttb_word_bits'):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f'mem.{name} must be positive.')
        if self.dram_power_mw < 0:
            raise ConfigurationError('mem.dram_power_mw must be >= 0.')
        object.__setattr__(self, 'energy', check_energy_table(self.energy))

    @property
    def cycle_seconds(self):
        return 1e-6 / self.clock_mhz

    @property
    def static_pj_per_cycle(self):
        '''DRAM energy per core cycle: mW times ns gives pJ.'''
        return self.dram_power_mw * self.cycle_seconds * 1e9

    @property
    def weight_partition_bits(self):
        '''One ping-pong half of the weight buffer.'''
        return self.weight_glb_bytes * 8 // 2

    @property
    def ttb_partition_bits(self):
        '''One bank of the TTB buffer; the other holds the next tile.'''
        return self.ttb_glb_bytes * 8
