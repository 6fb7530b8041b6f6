#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Simulation reports and their JSON form.

A report is a JSON object::

    {
      "format": "ttbsim-report",
      "version": 1,
      "config_hash": "<sha256 of the merged configuration>",
      "mode": "heterogeneous" | "dense_only",
      "layers": [
        {"name": "block0.q", "kind": "linear" | "attention",
         "cycles": int, "stats": {"<unit>": CoreStats}, "energy": Energy,
         "theta_s": int | null, "n_dense": int, "n_sparse": int,
         "keep_q": float | null, "keep_k": float | null,
         "dram": {"read_bytes", "write_bytes", "weight_bytes",
                  "payload_bytes", "tag_bytes", "output_payload_bytes",
                  "output_tag_bytes", "tiles"}},
        ...
      ],
      "energy": Energy,
      "cycles": int, "energy_pj": float, "latency_s": float, "edp": float,
      "flops": {...}, "sparsity": {...}
    }

Keys are written sorted so that equal reports serialize to equal bytes.'''
import json
from collections import OrderedDict
from ttbsim.exceptions import ConfigurationError
from ttbsim.core import CoreStats
from ttbsim.memsys import EnergyReport

FORMAT = 'ttbsim-report'
VERSION = 1


class LayerReport:
    '''Cost of one simulated layer.'''

    def __init__(self, name, kind, cycles, stats, energy, theta_s=None,
                 n_dense=0, n_sparse=0, keep_q=None, keep_k=None, dram=None):
        self.name = name
        self.kind = kind
        self.cycles = int(cycles)
        self.stats = OrderedDict(sorted(stats.items()))
        self.energy = energy
        self.theta_s = theta_s
        self.n_dense = int(n_dense)
        self.n_sparse = int(n_sparse)
        self.keep_q = keep_q
        self.keep_k = keep_k
        self.dram = dict(dram or {})

    def to_dict(self):
        return OrderedDict(
            name=self.name,
            kind=self.kind,
            cycles=self.cycles,
            stats={k: s.to_dict() for k, s in self.stats.items()},
            energy=self.energy.to_dict(),
            theta_s=self.theta_s,
            n_dense=self.n_dense,
            n_sparse=self.n_sparse,
            keep_q=self.keep_q,
            keep_k=self.keep_k,
            dram=self.dram,
        )

    @classmethod
    def from_dict(cls, d):
        return cls(
            d['name'], d['kind'], d['cycles'],
            {k: CoreStats.from_dict(s) for k, s in d['stats'].items()},
            EnergyReport.from_dict(d['energy']),
            theta_s=d['theta_s'], n_dense=d['n_dense'],
            n_sparse=d['n_sparse'], keep_q=d['keep_q'], keep_k=d['keep_k'],
            dram=d['dram'],
        )

    def __repr__(self):
        return (f'LayerReport({self.name}, cycles={self.cycles}, '
                f'energy_pj={self.energy.total_pj:.1f})')


class SimReport:
    '''End-to-end result of a run.

    Layers execute one after the other, so the run's cycles are the sum of
    the layer cycles and its energy is the sum of the layer energies.'''

    def __init__(self, config_hash, mode, layers, energy, flops=None,
                 sparsity=None):
        self.config_hash = config_hash
        self.mode = mode
        self.layers = list(layers)
        self.energy = energy
        self.flops = flops or {}
        self.sparsity = sparsity or {}

    @property
    def cycles(self):
        return sum(layer.cycles for layer in self.layers)

    @property
    def energy_pj(self):
        return self.energy.total_pj

    @property
    def latency_s(self):
        return self.energy.latency_s

    @property
    def edp(self):
        return self.energy.edp

    def total(self, key):
        '''Sum of a memory event count over all layers.'''
        return sum(layer.energy.counts[key] for layer in self.layers)

    def dram_total(self, key):
        return sum(layer.dram.get(key, 0) for layer in self.layers)

    def keep_fractions(self):
        '''Mean query and key keep fractions over the attention layers.'''
        att = [la for la in self.layers if la.kind == 'attention']
        if not att:
            return None, None
        return (sum(la.keep_q for la in att) / len(att),
                sum(la.keep_k for la in att) / len(att))

    def layer(self, name):
        for la in self.layers:
            if la.name == name:
                return la
        raise KeyError(name)

    def to_dict(self):
        return OrderedDict(
            format=FORMAT,
            version=VERSION,
            config_hash=self.config_hash,
            mode=self.mode,
            layers=[la.to_dict() for la in self.layers],
            energy=self.energy.to_dict(),
            cycles=self.cycles,
            energy_pj=self.energy_pj,
            latency_s=self.latency_s,
            edp=self.edp,
            flops=self.flops,
            sparsity=self.sparsity,
        )

    @classmethod
    def from_dict(cls, d):
        if d.get('format') != FORMAT or d.get('version') != VERSION:
            raise ConfigurationError(
                f"Not a version {VERSION} report: format={d.get('format')!r}, "
                f"version={d.get('version')!r}."
            )
        return cls(d['config_hash'], d['mode'],
                   [LayerReport.from_dict(la) for la in d['layers']],
                   EnergyReport.from_dict(d['energy']), d['flops'],
                   d['sparsity'])

    def to_json(self, indent=1):
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def save(self, path):
        with open(path, 'w') as f:
            f.write(self.to_json())

    @classmethod
    def load(cls, path):
        with open(path) as f:
            return cls.from_json(f.read())

    def __repr__(self):
        return (f'SimReport(mode={self.mode}, layers={len(self.layers)}, '
                f'cycles={self.cycles}, energy_pj={self.energy_pj:.1f})')
