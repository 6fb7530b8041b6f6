#!/usr/bin/env python
# -*- coding: utf-8 -*-
import logging
import math
from collections import OrderedDict
from ttbsim.exceptions import ConfigurationError
from .config import ENERGY_KINDS, MemConfig

logger = logging.getLogger(__name__)


class EnergyReport:
    '''Event counts and energies accumulated by a memory system over some
    stretch of simulated time.

    Parameters
    ----------
    counts: dict
        Events per kind.
    event_pj: dict
        Energy per kind, i.e. count times the table entry.
    compute_pj: dict
        Compute energy reported by each core.
    static_pj: float
        DRAM energy accrued over the elapsed cycles.
    cycles: int
        Elapsed cycles.
    clock_mhz: float
        Clock used to convert cycles into seconds.
    '''

    def __init__(self, counts, event_pj, compute_pj, static_pj, cycles,
                 clock_mhz):
        self.counts = OrderedDict((k, counts.get(k, 0)) for k in ENERGY_KINDS)
        self.event_pj = OrderedDict(
            (k, float(event_pj.get(k, 0.0))) for k in ENERGY_KINDS
        )
        self.compute_pj = OrderedDict(sorted(
            (k, float(v)) for k, v in compute_pj.items()
        ))
        self.static_pj = float(static_pj)
        self.cycles = int(cycles)
        self.clock_mhz = float(clock_mhz)

    @property
    def memory_pj(self):
        return sum(self.event_pj.values()) + self.static_pj

    @property
    def total_compute_pj(self):
        return sum(self.compute_pj.values())

    @property
    def total_pj(self):
        return self.memory_pj + self.total_compute_pj

    @property
    def energy_j(self):
        return self.total_pj * 1e-12

    @property
    def latency_s(self):
        return self.cycles / (self.clock_mhz * 1e6)

    @property
    def edp(self):
        '''Energy-delay product in joule-seconds.'''
        return self.energy_j * self.latency_s

    def __sub__(self, other):
        return EnergyReport(
            {k: self.counts[k] - other.counts[k] for k in ENERGY_KINDS},
            {k: self.event_pj[k] - other.event_pj[k] for k in ENERGY_KINDS},
            {k: v - other.compute_pj.get(k, 0.0)
             for k, v in self.compute_pj.items()},
            self.static_pj - other.static_pj,
            self.cycles - other.cycles,
            self.clock_mhz
        )

    def to_dict(self):
        return OrderedDict(
            counts=dict(self.counts),
            event_pj=dict(self.event_pj),
            compute_pj=dict(self.compute_pj),
            static_pj=self.static_pj,
            cycles=self.cycles,
            clock_mhz=self.clock_mhz,
            total_pj=self.total_pj,
            edp=self.edp,
        )

    @classmethod
    def from_dict(cls, d):
        return cls(d['counts'], d['event_pj'], d['compute_pj'],
                   d['static_pj'], d['cycles'], d['clock_mhz'])

    def __eq__(self, other):
        return (isinstance(other, EnergyReport)
                and self.to_dict() == other.to_dict())

    def __repr__(self):
        return (f'EnergyReport(cycles={self.cycles}, '
                f'total_pj={self.total_pj:.1f})')


class MemorySystem:
    '''Counts memory events of one simulated run and converts them into
    energy.

    Parameters
    ----------
    config: MemConfig
        Capacities, bandwidth and the per-event energy table.
    '''

    def __init__(self, config=None):
        self.config = config if config is not None else MemConfig()
        self._counts = dict.fromkeys(ENERGY_KINDS, 0)
        self._compute = {}
        self._cycles = 0

    def record_event(self, kind, quantity=1):
        '''Add ``quantity`` events of a kind listed in the energy table.'''
        if kind not in self.config.energy:
            raise ConfigurationError(f'Unknown memory event kind {kind!r}.')
        if quantity < 0:
            raise ValueError(f'Negative event quantity {quantity} for {kind}.')
        self._counts[kind] += quantity

    def add_compute(self, core, pj):
        if pj < 0:
            raise ValueError(f'Negative compute energy {pj} for {core}.')
        self._compute[core] = self._compute.get(core, 0.0) + pj

    def advance(self, cycles):
        '''Let simulated time pass; DRAM power is charged for it.'''
        if cycles < 0:
            raise ValueError(f'Cannot advance by {cycles} cycles.')
        self._cycles += int(cycles)

    def dram_cycles(self, nbytes):
        '''Cycles to move a number of bytes at the DRAM bandwidth.'''
        # rounded first so that exact multiples of a fractional bandwidth
        # do not spill into an extra cycle
        return math.ceil(round(nbytes / self.config.dram_bandwidth, 9))

    def report(self):
        table = self.config.energy
        return EnergyReport(
            dict(self._counts),
            {k: self._counts[k] * table[k] for k in ENERGY_KINDS},
            dict(self._compute),
            self._cycles * self.config.static_pj_per_cycle,
            self._cycles,
            self.config.clock_mhz
        )

    def snapshot(self):
        return self.report()

    def since(self, snapshot):
        '''Everything recorded after a snapshot was taken.'''
        return self.report() - snapshot


def overlap(compute_cycles, transfer_cycles):
    '''Effective cycles of one double-buffered tile.'''
    assert compute_cycles >= 0 and transfer_cycles >= 0
    return max(compute_cycles, transfer_cycles)


def pipeline_latency(compute_tiles, transfer_tiles):
    '''Latency of a double-buffered tile sequence: the first transfer cannot
    be hidden and every later transfer overlaps the previous tile's
    compute.'''
    compute_tiles = list(compute_tiles)
    transfer_tiles = list(transfer_tiles)
    assert len(compute_tiles) == len(transfer_tiles)
    if not compute_tiles:
        return 0
    total = transfer_tiles[0]
    for i, c in enumerate(compute_tiles):
        x = transfer_tiles[i + 1] if i + 1 < len(transfer_tiles) else 0
        total += overlap(c, x)
    return total


def serial_latency(compute_tiles, transfer_tiles):
    '''Latency when every transfer and compute phase runs back to back.'''
    return sum(compute_tiles) + sum(transfer_tiles)
