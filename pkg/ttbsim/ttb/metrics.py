#!/usr/bin/env python
# -*- coding: utf-8 -*-
from collections import namedtuple
import numpy as np


class SparsityMetrics(namedtuple('SparsityMetrics', [
    'l_bsp', 'lam', 'active_fraction', 'dead_feature_fraction'
])):
    '''Bundle-level sparsity of a set of layer activations.

    Attributes
    ----------
    l_bsp: int
        Sum of all bundle tags over all layers.
    lam: float
        Weight of the bundle-sparsity penalty.
    active_fraction: float
        Active bundles over all bundles.
    dead_feature_fraction: float
        Features without any active bundle over all features.
    '''

    @property
    def loss(self):
        '''The weighted penalty ``lam * l_bsp``.'''
        return self.lam * self.l_bsp


def sparsity_metrics(grids, lam=1.0):
    '''Aggregate bundle sparsity over the grids of several layers, which may
    differ in token and feature counts. An empty sequence yields zeros.'''
    l_bsp = 0
    active = total = 0
    dead = features = 0
    for g in grids:
        l_bsp += int(g.tags.sum(dtype=np.int64))
        active += g.active_count()
        total += g.bundle_count * g.D
        dead += int((g.active_bundles_per_feature() == 0).sum())
        features += g.D
    return SparsityMetrics(
        l_bsp=l_bsp,
        lam=float(lam),
        active_fraction=active / total if total else 0.0,
        dead_feature_fraction=dead / features if features else 0.0,
    )
