#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Reconfigurable attention core.

Mode 1 keeps the scores of a tile stationary in the PE array: kept query
bundles flow in from the left, kept key tokens from the top, and every PE
AND-accumulates one head feature per step, each step covering at most
``lanes`` bundle cells. Mode 2 reuses the resident scores: value tokens flow
from the top and each score selects the values it multiplies, the partial
outputs flowing right into the output bundle buffers. Tiles are formed per
bundle time index, because scores only pair queries and keys of the same time
point.'''
import warnings
from collections import namedtuple
import numpy as np
from ttbsim.exceptions import ConfigurationError, ShapeError
from .stats import CoreStats


class AttnCoreConfig(namedtuple('AttnCoreConfig', [
    'rows', 'cols', 'groups', 's_bits', 'e_and', 'e_sac', 'mode_switch',
    'heads_parallel', 'lanes'
])):
    '''PE array shape, time groups per PE (``None`` for the bundle time
    extent), score width, energies per AND- and select-accumulate (pJ),
    mode switch cycles, the number of heads processed concurrently and the
    bundle cells a PE consumes per cycle.'''

    def __new__(cls, rows=16, cols=32, groups=None, s_bits=8, e_and=0.01,
                e_sac=0.02, mode_switch=1, heads_parallel=1, lanes=10):
        for name, v in (('rows', rows), ('cols', cols),
                        ('heads_parallel', heads_parallel), ('lanes', lanes)):
            if v < 1:
                raise ConfigurationError(f'attn.{name} must be >= 1.')
        if groups is not None and groups < 1:
            raise ConfigurationError('attn.groups must be >= 1.')
        if not 6 <= s_bits <= 10:
            raise ConfigurationError(
                f'attn.s_bits must be within 6..10, got {s_bits}.'
            )
        if mode_switch < 0:
            raise ConfigurationError('attn.mode_switch must be >= 0.')
        return super().__new__(
            cls, int(rows), int(cols), None if groups is None else int(groups),
            int(s_bits), float(e_and), float(e_sac), int(mode_switch),
            int(heads_parallel), int(lanes)
        )

    def time_steps(self, bs_t):
        '''Cycles a PE needs per head feature to cover a bundle's time
        points.'''
        g = bs_t if self.groups is None else self.groups
        if bs_t % g:
            warnings.warn(f'attn.groups={g} does not divide the bundle time '
                          f'extent {bs_t}.')
        return -(-bs_t // g)

    def feature_steps(self, bs_t, bs_n):
        '''Cycles a PE needs per head feature: every time group of a bundle
        is consumed ``lanes`` cells at a time.'''
        g = min(bs_t if self.groups is None else self.groups, bs_t)
        return self.time_steps(bs_t) * -(-g * bs_n // self.lanes)


def _check_head(mask, cfg):
    if mask.dh > (1 << cfg.s_bits) - 1:
        raise ConfigurationError(
            f'Head width {mask.dh} overflows {cfg.s_bits}-bit scores.'
        )


def _extents(total, size):
    full, rest = divmod(total, size)
    return [size] * full + ([rest] if rest else [])


def attention_tiles(mask, cfg):
    '''(bt, R_t, C_t) of every tile: kept query bundles by kept key tokens
    of one bundle time index.'''
    bs_n = mask.shape.bs_n
    nbn = mask.keep_k.shape[0]
    tokens = np.minimum(bs_n, mask.N - bs_n * np.arange(nbn))
    tiles = []
    for bt in range(mask.keep_q.shape[1]):
        nq = int(mask.keep_q[:, bt].sum())
        nk = int((mask.keep_k[:, bt] * tokens).sum())
        if nq == 0 or nk == 0:
            continue
        tiles += [(bt, r, c) for r in _extents(nq, cfg.rows)
                  for c in _extents(nk, cfg.cols)]
    return tiles


def mode1_tile_cycles(r_t, c_t, dh, steps):
    return (r_t - 1) + (c_t - 1) + dh * steps


def _as_int(a, shape, name):
    a = np.asarray(a, dtype=np.int64)
    if a.shape != shape:
        raise ShapeError(f'{name} of shape {a.shape}, expected {shape}.')
    return a


def simulate_mode1(q, k, mask, cfg, mem=None):
    '''Scores of one head on the kept query/key rows.

    Parameters
    ----------
    q, k: arrays of shape (T, N, dh)
        Binary queries and keys.
    mask: PruneMask
        Kept rows of the head.
    cfg: AttnCoreConfig
    mem: MemorySystem or None

    Returns
    -------
    s: ndarray of int64, shape (T, N, N)
        Scores, zero where not computed.
    stats: CoreStats
    '''
    _check_head(mask, cfg)
    shape = (mask.T, mask.N, mask.dh)
    q = _as_int(q, shape, 'q')
    k = _as_int(k, shape, 'k')
    s = (q @ k.transpose(0, 2, 1)) * mask.s_mask
    tiles = attention_tiles(mask, cfg)
    if not tiles:
        return s, CoreStats()

    bs_t, bs_n = mask.shape
    steps = cfg.feature_steps(bs_t, bs_n)
    dh = mask.dh
    ops = mask.op_count()
    stats = CoreStats(
        mac_equivalents=ops.s_macs,
        register_accesses=ops.s_macs // dh,
        energy={'aac': ops.s_macs * cfg.e_and},
    )
    q_bits = k_bits = 0
    for _, r, c in tiles:
        stats.cycles += mode1_tile_cycles(r, c, dh, steps)
        # one query bundle per row, one key token per column, reused across
        # the array
        q_bits += r * dh * bs_t * bs_n
        k_bits += c * dh * bs_t
    stats.activation_reads = q_bits + k_bits
    if mem is not None:
        mem.record_event('ttb_glb_read', -(-stats.activation_reads //
                                           mem.config.ttb_word_bits))
        mem.record_event('register_access', stats.register_accesses)
        mem.add_compute('attention', stats.energy['aac'])
    return s, stats


def simulate_mode2(s, v, mask, cfg, s_shift=0, mem=None):
    '''Outputs of one head from the resident scores.

    Parameters
    ----------
    s: array of shape (T, N, N)
        Scores from :py:func:`simulate_mode1`.
    v: array of shape (T, N, dh)
        Binary values.
    mask: PruneMask
    cfg: AttnCoreConfig
    s_shift: int
        Right shift applied to the scores as they are read out of the PE
        registers.
    mem: MemorySystem or None

    Returns
    -------
    y: ndarray of int64, shape (T, N, dh)
        Zero on pruned query rows.
    stats: CoreStats
    '''
    _check_head(mask, cfg)
    s = _as_int(s, (mask.T, mask.N, mask.N), 's')
    v = _as_int(v, (mask.T, mask.N, mask.dh), 'v')
    y = (s >> s_shift) @ v
    tiles = attention_tiles(mask, cfg)
    if not tiles:
        return y, CoreStats()

    bs_t, bs_n = mask.shape
    steps = cfg.feature_steps(bs_t, bs_n)
    dh = mask.dh
    ops = mask.op_count()
    stats = CoreStats(
        mac_equivalents=ops.sv_macs,
        psum_writebacks=ops.y_writebacks,
        energy={'sac': ops.sv_macs * cfg.e_sac},
    )
    for _, r, c in tiles:
        stats.cycles += cfg.mode_switch + mode1_tile_cycles(r, c, dh, steps)
        stats.activation_reads += c * dh * bs_t
        # partial outputs of every query bundle row, per head feature
        stats.register_accesses += r * dh * bs_t * bs_n
    if mem is not None:
        mem.record_event('ttb_glb_read', -(-stats.activation_reads //
                                           mem.config.ttb_word_bits))
        mem.record_event('register_access', stats.register_accesses)
        mem.add_compute('attention', stats.energy['sac'])
    return y, stats
