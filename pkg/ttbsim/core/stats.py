#!/usr/bin/env python
# -*- coding: utf-8 -*-
from dataclasses import dataclass, field, fields, asdict
from typing import Dict


@dataclass
class CoreStats:
    '''Event counters of one core over one workload.

    Attributes
    ----------
    cycles: int
        Busy cycles of the core.
    mac_equivalents: int
        Accumulate operations performed.
    weight_reads: int
        Weight elements read from the weight global buffer.
    activation_reads: int
        Activation bits read from the TTB global buffer.
    psum_writebacks: int
        Output elements written back.
    register_accesses: int
        Core-local register reads and writes.
    port_bits: int
        Bits streamed through the weight global buffer port.
    energy: dict
        Compute energy in pJ by category.
    '''
    cycles: int = 0
    mac_equivalents: int = 0
    weight_reads: int = 0
    activation_reads: int = 0
    psum_writebacks: int = 0
    register_accesses: int = 0
    port_bits: int = 0
    energy: Dict[str, float] = field(default_factory=dict)

    @property
    def total_energy(self):
        return sum(self.energy.values())

    def __add__(self, other):
        '''Counters of two workloads run one after the other.'''
        out = CoreStats(**{
            f.name: getattr(self, f.name) + getattr(other, f.name)
            for f in fields(self) if f.name != 'energy'
        })
        for src in (self.energy, other.energy):
            for k, v in src.items():
                out.energy[k] = out.energy.get(k, 0.0) + v
        return out

    def scaled_cycles(self, parallel):
        '''A copy whose cycles are divided among ``parallel`` replicas.'''
        out = CoreStats(**asdict(self))
        out.cycles = -(-self.cycles // parallel)
        return out

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)
