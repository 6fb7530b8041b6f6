#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Synthetic spike workloads with controllable density and bundle
clustering.'''
import numpy as np
from ttbsim.exceptions import ConfigurationError
from ttbsim.ttb import BundleShape, TTBGrid


def _rates(rate, D):
    rate = np.asarray(rate, dtype=np.float64)
    if rate.ndim == 0:
        rate = np.full(D, float(rate))
    if rate.shape != (D,):
        raise ConfigurationError(
            f'Expected one spike rate or {D} per-feature rates, got shape '
            f'{rate.shape}.'
        )
    if np.any((rate < 0) | (rate > 1)):
        raise ConfigurationError('Spike rates must lie within [0, 1].')
    return rate


def _valid_cells(T, N, shape, nbn, nbt):
    '''Which cells of the bundle layout lie inside the tensor.'''
    bs_t, bs_n = shape
    t = np.arange(nbt)[:, None] * bs_t + np.arange(bs_t)[None, :]
    n = np.arange(nbn)[:, None] * bs_n + np.arange(bs_n)[None, :]
    return (n[:, None, None, :] < N) & (t[None, :, :, None] < T)


def _fill_fewest(rng, valid, rate, cells):
    '''Per feature, draw a binomial spike count and pack it into as few
    bundles as possible, largest bundles first.'''
    nbn, nbt = valid.shape[:2]
    capacity = valid.sum(axis=(2, 3)).ravel()
    flat_valid = valid.reshape(nbn * nbt, -1)
    flat = cells.reshape(nbn * nbt, flat_valid.shape[1], -1)
    total = int(capacity.sum())
    for d, r in enumerate(rate):
        k = int(rng.binomial(total, r))
        order = rng.permutation(len(capacity))
        order = order[np.argsort(-capacity[order], kind='stable')]
        for b in order:
            if k == 0:
                break
            slots = np.flatnonzero(flat_valid[b])
            take = min(k, len(slots))
            if take < len(slots):
                slots = rng.choice(slots, take, replace=False)
            flat[b, slots, d] = True
            k -= take


def child_seeds(seed, n):
    '''n independent integer seeds derived from one.'''
    return [int(s.generate_state(1, np.uint64)[0])
            for s in np.random.SeedSequence(seed).spawn(n)]


def synth_workload(T, N, D, rate, cluster, shape, seed):
    '''Random spikes of a given expected density.

    Parameters
    ----------
    T, N, D: int
        Extents of the tensor.
    rate: float or sequence of D floats
        Expected spike density, overall or per feature.
    cluster: float in [0, 1]
        Bundle affinity. 0 draws every bit independently, 1 packs each
        feature's spikes into the fewest bundles that hold them, and values
        in between first activate bundles with probability
        ``(1 - c)(1 - (1 - r)^v) + c r`` and then fill active bundles so
        that the expected density stays ``r``.
    shape: BundleShape
        Bundles the clustering refers to.
    seed: int
        Seed of the random stream.

    Returns
    -------
    x: SpikeTensor
    '''
    rate = _rates(rate, D)
    if not 0 <= cluster <= 1:
        raise ConfigurationError(f'cluster must lie within [0, 1], got '
                                 f'{cluster}.')
    shape = BundleShape(*shape)
    rng = np.random.Generator(np.random.PCG64(seed))
    nbt = -(-T // shape.bs_t)
    nbn = -(-N // shape.bs_n)
    valid = _valid_cells(T, N, shape, nbn, nbt)
    cells = np.zeros((nbn, nbt, shape.bs_t, shape.bs_n, D), dtype=np.bool_)

    if cluster == 0:
        bits = rng.random((T, N, D)) < rate
        padded = np.zeros((nbt * shape.bs_t, nbn * shape.bs_n, D), np.bool_)
        padded[:T, :N] = bits
        cells[:] = padded.reshape(
            nbt, shape.bs_t, nbn, shape.bs_n, D
        ).transpose(2, 0, 1, 3, 4)
    elif cluster == 1:
        _fill_fewest(rng, valid, rate, cells)
    else:
        v = shape.volume
        p_bundle = (1 - cluster) * (1 - (1 - rate)**v) + cluster * rate
        p_cell = np.divide(rate, p_bundle, out=np.zeros(D),
                           where=p_bundle > 0)
        active = rng.random((nbn, nbt, 1, 1, D)) < p_bundle
        cells[:] = active & (rng.random(cells.shape) < p_cell)
        cells &= valid[..., None]
    return TTBGrid(shape, cells, T, N).unpack()


def synth_bimodal(T, N, D, shape, seed, dense_rate=0.9, sparse_rate=0.02,
                  dense_fraction=0.5, cluster=0.0):
    '''A workload whose features are either dense or nearly silent.

    ``round(dense_fraction * D)`` randomly chosen features spike at
    ``dense_rate``, the rest at ``sparse_rate``.'''
    if not 0 <= dense_fraction <= 1:
        raise ConfigurationError(
            f'dense_fraction must lie within [0, 1], got {dense_fraction}.'
        )
    seeds = child_seeds(seed, 2)
    rng = np.random.Generator(np.random.PCG64(seeds[0]))
    dense = rng.permutation(D)[:int(round(dense_fraction * D))]
    rate = np.full(D, float(sparse_rate))
    rate[dense] = dense_rate
    return synth_workload(T, N, D, rate, cluster, shape, seeds[1])
