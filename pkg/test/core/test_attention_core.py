#!/usr/bin/env python
# -*- coding: utf-8 -*-
import numpy as np
import pytest
from ttbsim.exceptions import ConfigurationError, ShapeError
from ttbsim.ttb import SpikeTensor, pack_ttb
from ttbsim.ecp import EcpConfig, ecp_prune, pruned_attention
from ttbsim.core import AttnCoreConfig, simulate_mode1, simulate_mode2
from ttbsim.memsys import MemorySystem


def _mask(q, k, shape, theta=(0, 0)):
    return ecp_prune(pack_ttb(SpikeTensor(q), shape),
                     pack_ttb(SpikeTensor(k), shape), EcpConfig(*theta))


def _trace_tile(r_t, c_t, dh, steps=1):
    '''PE (i, j) receives its first query/key pair after i + j cycles of
    skew and then accumulates one head feature every ``steps`` cycles.'''
    return max(i + j + dh * steps for i in range(r_t) for j in range(c_t))


def test_single_tile():
    rng = np.random.default_rng(0)
    q = (rng.random((1, 32, 64)) < 0.5).astype(np.uint8)
    k = (rng.random((1, 32, 64)) < 0.5).astype(np.uint8)
    mask = _mask(q, k, (1, 2))
    s, stats = simulate_mode1(q, k, mask, AttnCoreConfig())
    assert(stats.cycles == 15 + 31 + 64 == 110 == _trace_tile(16, 32, 64))
    assert(np.array_equal(s, q.astype(np.int64) @
                          k.astype(np.int64).transpose(0, 2, 1)))
    assert(stats.mac_equivalents == 32 * 32 * 64)
    # one resident score per kept (query, key) token pair
    assert(stats.register_accesses == 32 * 32)
    # keys are fetched once per column, not once per PE
    k_reads = 32 * 64
    q_reads = 16 * 64 * 2
    assert(stats.activation_reads == q_reads + k_reads)
    assert(k_reads <= 16 * 32 * 64 / 16)


@pytest.mark.parametrize('seed', range(20))
def test_cycles_match_trace(seed):
    rng = np.random.default_rng(seed)
    T = int(rng.integers(1, 5))
    N = int(rng.integers(1, 40))
    dh = int(rng.integers(1, 20))
    shape = (int(rng.integers(1, T + 1)), int(rng.integers(1, 5)))
    cfg = AttnCoreConfig(rows=int(rng.integers(1, 9)),
                         cols=int(rng.integers(1, 17)))
    q = (rng.random((T, N, dh)) < 0.3).astype(np.uint8)
    k = (rng.random((T, N, dh)) < 0.3).astype(np.uint8)
    mask = _mask(q, k, shape, (int(rng.integers(0, 3)),
                               int(rng.integers(0, 3))))
    _, stats = simulate_mode1(q, k, mask, cfg)
    bs_t, bs_n = shape
    steps = -(-bs_t * bs_n // cfg.lanes)
    expected = 0
    for bt in range(mask.keep_q.shape[1]):
        nq = int(mask.keep_q[:, bt].sum())
        nk = int(mask.k_tokens[bt * bs_t].sum())
        if nq == 0 or nk == 0:
            continue
        for r0 in range(0, nq, cfg.rows):
            for c0 in range(0, nk, cfg.cols):
                expected += _trace_tile(min(cfg.rows, nq - r0),
                                        min(cfg.cols, nk - c0), dh, steps)
    assert(stats.cycles == expected)


def test_all_pruned():
    q = np.zeros((2, 4, 8), dtype=np.uint8)
    k = np.ones((2, 4, 8), dtype=np.uint8)
    mask = _mask(q, k, (1, 2), (1, 1))
    s, stats = simulate_mode1(q, k, mask, AttnCoreConfig())
    assert(not s.any())
    assert(stats.cycles == 0 and stats.mac_equivalents == 0)
    y, stats = simulate_mode2(s, k, mask, AttnCoreConfig())
    assert(not y.any() and stats.cycles == 0)


def test_compounding_two_percent():
    q = np.zeros((1, 10, 4), dtype=np.uint8)
    k = np.zeros((1, 10, 4), dtype=np.uint8)
    q[0, :2, 0] = 1
    k[0, :1, 1] = 1
    mask = _mask(q, k, (1, 1), (1, 1))
    assert(mask.keep_fraction_q == pytest.approx(0.2))
    assert(mask.keep_fraction_k == pytest.approx(0.1))
    _, stats = simulate_mode1(q, k, mask, AttnCoreConfig())
    assert(stats.mac_equivalents == 2 * 1 * 4)
    assert(stats.mac_equivalents / (10 * 10 * 4) == pytest.approx(0.02))


def test_mode2_identity():
    rng = np.random.default_rng(1)
    v = (rng.random((2, 6, 8)) < 0.5).astype(np.uint8)
    q = np.ones((2, 6, 8), dtype=np.uint8)
    mask = _mask(q, q, (1, 2))
    s = np.broadcast_to(np.eye(6, dtype=np.int64), (2, 6, 6))
    y, stats = simulate_mode2(s, v, mask, AttnCoreConfig())
    assert(np.array_equal(y, v))
    assert(stats.mac_equivalents == 2 * 6 * 6 * 8)


def test_mode2_shift():
    rng = np.random.default_rng(2)
    v = (rng.random((1, 5, 4)) < 0.5).astype(np.uint8)
    q = np.ones((1, 5, 4), dtype=np.uint8)
    mask = _mask(q, q, (1, 1))
    s = rng.integers(0, 60, (1, 5, 5))
    y, _ = simulate_mode2(s, v, mask, AttnCoreConfig(), s_shift=3)
    assert(np.array_equal(y, (s // 8) @ v.astype(np.int64)))


@pytest.mark.parametrize('seed', range(20))
def test_modes_match_reference(seed):
    rng = np.random.default_rng(seed)
    T = int(rng.integers(1, 5))
    N = int(rng.integers(1, 20))
    dh = int(rng.integers(1, 16))
    shape = (int(rng.integers(1, T + 1)), int(rng.integers(1, 4)))
    q, k, v = ((rng.random((T, N, dh)) < 0.3).astype(np.uint8)
               for _ in range(3))
    mask = _mask(q, k, shape, (int(rng.integers(0, 4)),
                               int(rng.integers(0, 4))))
    cfg = AttnCoreConfig(mode_switch=2)
    shift = int(rng.integers(0, 3))
    s, st1 = simulate_mode1(q, k, mask, cfg)
    y, st2 = simulate_mode2(s, v, mask, cfg, s_shift=shift)
    ref, ops = pruned_attention(q, k, v, mask, s_shift=shift)
    assert(np.array_equal(y, ref))
    assert(not y[~mask.y_rows].any())
    assert(st1.mac_equivalents == ops.s_macs)
    assert(st2.mac_equivalents == ops.sv_macs)
    if st1.cycles:
        assert(st2.psum_writebacks == ops.y_writebacks)
        tiles = (st2.cycles - st1.cycles) // 2
        assert(st2.cycles == st1.cycles + 2 * tiles)
        assert(tiles >= 1)


def test_shape_mismatch():
    q = np.ones((1, 4, 4), dtype=np.uint8)
    mask = _mask(q, q, (1, 2))
    s, _ = simulate_mode1(q, q, mask, AttnCoreConfig())
    with pytest.raises(ShapeError):
        simulate_mode2(s[:, :3], q, mask, AttnCoreConfig())
    with pytest.raises(ShapeError):
        simulate_mode1(q[:, :3], q, mask, AttnCoreConfig())


def test_score_width():
    q = np.ones((1, 2, 64), dtype=np.uint8)
    mask = _mask(q, q, (1, 1))
    with pytest.raises(ConfigurationError):
        simulate_mode1(q, q, mask, AttnCoreConfig(s_bits=6))
    s, _ = simulate_mode1(q, q, mask, AttnCoreConfig(s_bits=7))
    assert(s.max() == 64)
    for bits in [5, 11]:
        with pytest.raises(ConfigurationError):
            AttnCoreConfig(s_bits=bits)


def test_groups():
    cfg = AttnCoreConfig(groups=2)
    assert(cfg.time_steps(4) == 2)
    assert(AttnCoreConfig().time_steps(4) == 1)
    with pytest.warns(UserWarning):
        assert(cfg.time_steps(3) == 2)


def test_lanes():
    cfg = AttnCoreConfig()
    assert(cfg.feature_steps(2, 4) == 1)
    assert(cfg.feature_steps(2, 5) == 1)
    assert(cfg.feature_steps(2, 7) == 2)
    assert(cfg.feature_steps(4, 5) == 2)
    assert(AttnCoreConfig(groups=2).feature_steps(4, 5) == 2)
    assert(AttnCoreConfig(groups=1, lanes=4).feature_steps(2, 5) == 4)
    with pytest.raises(ConfigurationError):
        AttnCoreConfig(lanes=0)


@pytest.mark.parametrize('lanes, cycles', [(10, 26), (20, 18), (5, 42)])
def test_lanes_tile_cycles(lanes, cycles):
    # two query bundles of 4x5 cells by ten key tokens
    q = np.ones((4, 10, 8), dtype=np.uint8)
    mask = _mask(q, q, (4, 5))
    cfg = AttnCoreConfig(lanes=lanes)
    s, st1 = simulate_mode1(q, q, mask, cfg)
    assert(st1.cycles == cycles == _trace_tile(2, 10, 8, -(-20 // lanes)))
    y, st2 = simulate_mode2(s, q, mask, cfg)
    assert(st2.cycles == cycles + cfg.mode_switch)
    assert(np.array_equal(y, s @ q.astype(np.int64)))


def test_memory_events():
    q = np.ones((1, 4, 8), dtype=np.uint8)
    mask = _mask(q, q, (1, 2))
    mem = MemorySystem()
    s, st1 = simulate_mode1(q, q, mask, AttnCoreConfig(), mem)
    _, st2 = simulate_mode2(s, q, mask, AttnCoreConfig(), mem=mem)
    rep = mem.report()
    assert(rep.compute_pj['attention'] == pytest.approx(
        st1.energy['aac'] + st2.energy['sac']
    ))
    assert(rep.counts['register_access'] ==
           st1.register_accesses + st2.register_accesses)
