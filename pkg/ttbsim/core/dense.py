#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Output-stationary dense core executing select-accumulate operations.

Each tile maps up to ``rows`` bundles onto the PE rows and up to ``cols``
output features onto the PE columns. Bundles flow in from the left and
weight rows from the top with a one-cycle skew per PE; every PE then
accumulates one input feature per ``ceil(volume / lanes)`` cycles and the
finished partial sums drain one row per cycle.'''
from collections import namedtuple
import numpy as np
from ttbsim.exceptions import ConfigurationError
from .stats import CoreStats


class DenseCoreConfig(namedtuple('DenseCoreConfig', [
    'rows', 'cols', 'lanes', 'e_pe', 'weight_bits'
])):
    '''PE array shape, spikes per PE per cycle, energy per occupied
    PE-cycle (pJ) and weight width.'''

    def __new__(cls, rows=16, cols=32, lanes=10, e_pe=0.1, weight_bits=8):
        for name, v in (('rows', rows), ('cols', cols), ('lanes', lanes)):
            if v < 1:
                raise ConfigurationError(f'dense.{name} must be >= 1.')
        return super().__new__(cls, int(rows), int(cols), int(lanes),
                               float(e_pe), int(weight_bits))


def _extents(total, size):
    full, rest = divmod(total, size)
    return [size] * full + ([rest] if rest else [])


def tile_cycles(r_t, c_t, d_in, volume, lanes):
    '''Skew fill, accumulation over d_in input features, and drain.'''
    return (r_t - 1) + (c_t - 1) + d_in * -(-volume // lanes) + r_t


def dense_tiles(bundles, d_in, d_out, cfg):
    '''(R_t, C_t) of every tile, bundle tiles outermost. Empty when there is
    no work.'''
    if bundles == 0 or d_in == 0 or d_out == 0:
        return []
    return [(r, c) for r in _extents(bundles, cfg.rows)
            for c in _extents(d_out, cfg.cols)]


def dense_cycles(bundles, d_in, d_out, volume, cfg):
    '''Closed-form cycle count of the dense core.'''
    return sum(tile_cycles(r, c, d_in, volume, cfg.lanes)
               for r, c in dense_tiles(bundles, d_in, d_out, cfg))


def dense_port_bits(bundles, d_in, d_out, cfg):
    '''Weight bits streamed through the weight buffer port, one weight row
    segment per input feature and tile.'''
    return sum(d_in * c * cfg.weight_bits
               for _, c in dense_tiles(bundles, d_in, d_out, cfg))


def simulate_dense(x_d, w_d, cfg, mem=None):
    '''Run the dense partition of a layer.

    Parameters
    ----------
    x_d: TTBGrid
        Dense-partition activations.
    w_d: array of shape (D_dense, D_out)
        Matching weight rows.
    cfg: DenseCoreConfig
    mem: MemorySystem or None
        Receives the buffer and register events.

    Returns
    -------
    psum: ndarray of int64, shape (T, N, D_out)
        ``x_d @ w_d``.
    stats: CoreStats
    '''
    w_d = np.asarray(w_d, dtype=np.int64)
    d_in, d_out = w_d.shape
    assert d_in == x_d.D
    T, N = x_d.T, x_d.N
    if d_in == 0:
        return np.zeros((T, N, d_out), dtype=np.int64), CoreStats()
    psum = x_d.backing.to_numpy(np.int64) @ w_d

    volume = x_d.shape.volume
    stats = CoreStats()
    pe_cycles = 0
    tiles = dense_tiles(x_d.bundle_count, d_in, d_out, cfg)
    for r, c in tiles:
        cycles = tile_cycles(r, c, d_in, volume, cfg.lanes)
        stats.cycles += cycles
        stats.weight_reads += d_in * c
        stats.port_bits += d_in * c * cfg.weight_bits
        # every input feature of every bundle row of the tile is streamed in
        stats.activation_reads += r * d_in * volume
        stats.mac_equivalents += r * c * d_in * volume
        stats.register_accesses += r * c
        pe_cycles += r * c * cycles
    stats.psum_writebacks = T * N * d_out
    stats.energy['dense'] = pe_cycles * cfg.e_pe
    if mem is not None:
        port = mem.config.weight_port_bits
        mem.record_event('weight_glb_read', sum(
            d_in * -(-c * cfg.weight_bits // port) for _, c in tiles
        ))
        mem.record_event('ttb_glb_read', -(-stats.activation_reads //
                                           mem.config.ttb_word_bits))
        mem.record_event('register_access', stats.register_accesses)
        mem.add_compute('dense', stats.energy['dense'])
    return psum, stats
