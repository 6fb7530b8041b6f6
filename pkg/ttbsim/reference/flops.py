#!/usr/bin/env python
# -*- coding: utf-8 -*-
from collections import namedtuple

LayerOps = namedtuple('LayerOps', ['layer', 'kind', 'd_in', 'd_out',
                                   'macs', 'lif_ops'])


class FlopsBreakdown:
    '''Operation counts of one inference, per layer and per component.

    Components are ``projection`` (Q, K, V and output projections), ``mlp``,
    ``attention`` (the score and value products) and ``lif`` (neuron
    updates). Linear-layer MACs grow as T*N*D^2 and attention MACs as
    T*N^2*D.
    '''

    def __init__(self, layers):
        self.layers = list(layers)

    def _sum(self, kind):
        return sum(r.macs for r in self.layers if r.kind == kind)

    @property
    def projection(self):
        return self._sum('projection')

    @property
    def mlp(self):
        return self._sum('mlp')

    @property
    def attention(self):
        return self._sum('attention')

    @property
    def lif(self):
        return sum(r.lif_ops for r in self.layers)

    @property
    def total(self):
        return self.projection + self.mlp + self.attention + self.lif

    def fractions(self):
        total = self.total
        return {k: (getattr(self, k) / total if total else 0.0)
                for k in ('projection', 'mlp', 'attention', 'lif')}

    def to_dict(self):
        return dict(
            projection=self.projection,
            mlp=self.mlp,
            attention=self.attention,
            lif=self.lif,
            total=self.total,
            fractions=self.fractions(),
            layers=[r._asdict() for r in self.layers],
        )


def flops_breakdown(cfg):
    '''Count the operations of ``cfg.L`` encoder blocks.'''
    T, N, D, Hd = cfg.T, cfg.N, cfg.D, cfg.hidden
    rows = []
    for b in range(cfg.L):
        for role in ('q', 'k', 'v'):
            rows.append(LayerOps(f'block{b}.{role}', 'projection', D, D,
                                 T * N * D * D, T * N * D))
        # S = Q K^T and Y = S V, each N^2 * dh per head and time point
        rows.append(LayerOps(f'block{b}.attn', 'attention', D, D,
                             2 * T * N * N * cfg.dh * cfg.H, T * N * D))
        rows.append(LayerOps(f'block{b}.proj', 'projection', D, D,
                             T * N * D * D, T * N * D))
        rows.append(LayerOps(f'block{b}.mlp1', 'mlp', D, Hd,
                             T * N * D * Hd, T * N * Hd))
        rows.append(LayerOps(f'block{b}.mlp2', 'mlp', Hd, D,
                             T * N * Hd * D, T * N * D))
    return FlopsBreakdown(rows)
