#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Occupancy model of the sparse core.

Every active (bundle, feature) pair is one work item. A unit fetches the
weight row of the feature once per pass over ``out_par`` output features and
reuses it for all spikes of the bundle, so an item with tag z costs
``z * ceil(D_out / out_par) + overhead`` cycles. Items are list-scheduled
onto the units in longest-processing-time order.'''
import heapq
from collections import namedtuple
import numpy as np
import scipy.sparse
from ttbsim.exceptions import ConfigurationError
from .stats import CoreStats


class SparseCoreConfig(namedtuple('SparseCoreConfig', [
    'units', 'out_par', 'e_op', 'overhead', 'weight_bits'
])):
    '''Parallel units, output features per pass, energy per accumulate (pJ),
    dispatch cycles per item and weight width.'''

    def __new__(cls, units=128, out_par=32, e_op=0.035, overhead=1,
                weight_bits=8):
        for name, v in (('units', units), ('out_par', out_par)):
            if v < 1:
                raise ConfigurationError(f'sparse.{name} must be >= 1.')
        if overhead < 0:
            raise ConfigurationError('sparse.overhead must be >= 0.')
        return super().__new__(cls, int(units), int(out_par), float(e_op),
                               int(overhead), int(weight_bits))


WorkItems = namedtuple('WorkItems', ['bn', 'bt', 'd', 'z', 'cost'])


def passes(d_out, cfg):
    return -(-d_out // cfg.out_par)


def work_items(grid, d_out, cfg):
    '''Active bundles of a grid as work items, in dispatch order: cost
    descending, then bundle and feature index ascending.'''
    bn, bt, d = np.nonzero(grid.tags)
    z = grid.tags[bn, bt, d].astype(np.int64)
    cost = z * passes(d_out, cfg) + cfg.overhead
    order = np.lexsort((d, bt, bn, -cost))
    return WorkItems(bn[order], bt[order], d[order], z[order], cost[order])


def lpt_schedule(costs, units):
    '''Greedy list scheduling of costs, taken in the given order, onto the
    least loaded unit (lowest index on ties).

    Returns
    -------
    makespan: int
    assignment: ndarray of int
        Unit of each item.
    '''
    heap = [(0, u) for u in range(min(units, len(costs)))]
    assignment = np.empty(len(costs), dtype=np.int64)
    makespan = 0
    for i, c in enumerate(costs):
        load, u = heapq.heappop(heap)
        assignment[i] = u
        load += int(c)
        makespan = max(makespan, load)
        heapq.heappush(heap, (load, u))
    return makespan, assignment


def estimate_sparse_cycles(grid, features, d_out, cfg, port_width=512):
    '''Lower bound of the sparse core cycles on a subset of features: the
    larger of the average unit load, the longest item and the port cycles of
    the weight fetches.'''
    tags = grid.tags[:, :, features]
    active = tags > 0
    items = int(active.sum())
    if items == 0 or d_out == 0:
        return 0
    work = int(tags.sum(dtype=np.int64)) * passes(d_out, cfg) + \
        items * cfg.overhead
    longest = int(tags.max()) * passes(d_out, cfg) + cfg.overhead
    port = -(-items * d_out * cfg.weight_bits // port_width)
    return max(-(-work // cfg.units), longest, port)


def simulate_sparse(x_s, w_s, cfg, mem=None):
    '''Run the sparse partition of a layer.

    Parameters
    ----------
    x_s: TTBGrid
        Sparse-partition activations.
    w_s: array of shape (D_sparse, D_out)
        Matching weight rows.
    cfg: SparseCoreConfig
    mem: MemorySystem or None
        Receives the buffer and register events.

    Returns
    -------
    psum: ndarray of int64, shape (T, N, D_out)
        ``x_s @ w_s``.
    stats: CoreStats
    '''
    w_s = np.asarray(w_s, dtype=np.int64)
    d_in, d_out = w_s.shape
    assert d_in == x_s.D
    T, N = x_s.T, x_s.N
    psum = np.zeros((T, N, d_out), dtype=np.int64)
    if d_in == 0 or x_s.active_count() == 0:
        return psum, CoreStats()
    spikes = scipy.sparse.csr_matrix(
        x_s.backing.to_numpy(np.int64).reshape(T * N, d_in)
    )
    psum[:] = np.asarray(spikes @ w_s).reshape(T, N, d_out)

    items = work_items(x_s, d_out, cfg)
    makespan, _ = lpt_schedule(items.cost, cfg.units)
    n = len(items.z)
    accumulates = int(items.z.sum()) * d_out
    stats = CoreStats(
        cycles=makespan,
        mac_equivalents=accumulates,
        weight_reads=n * d_out,
        activation_reads=n * x_s.shape.volume,
        psum_writebacks=T * N * d_out,
        register_accesses=n * d_out,
        port_bits=n * d_out * cfg.weight_bits,
        energy={'sparse': accumulates * cfg.e_op},
    )
    if mem is not None:
        port = mem.config.weight_port_bits
        segments = [min(cfg.out_par, d_out - j)
                    for j in range(0, d_out, cfg.out_par)]
        mem.record_event('weight_glb_read', n * sum(
            -(-c * cfg.weight_bits // port) for c in segments
        ))
        mem.record_event('ttb_glb_read', -(-stats.activation_reads //
                                           mem.config.ttb_word_bits))
        mem.record_event('register_access', stats.register_accesses)
        mem.add_compute('sparse', stats.energy['sparse'])
    return psum, stats
