#!/usr/bin/env python
# -*- coding: utf-8 -*-
import numpy as np
import pytest
from ttbsim.exceptions import ConfigurationError, ShapeError, \
    OracleMismatchError
from ttbsim.ttb import SpikeTensor, pack_ttb
from ttbsim.ecp import EcpConfig, row_active_counts, ecp_prune, \
    prune_heads, pruned_attention, error_bound_check


def _grid(bits, shape=(1, 1)):
    return pack_ttb(SpikeTensor(bits), shape)


def _full_s(q, k):
    q = q.astype(np.int64)
    k = k.astype(np.int64)
    return q @ k.transpose(0, 2, 1)


def test_ecp_config():
    assert(EcpConfig() == (0, 0))
    assert(EcpConfig().disabled)
    assert(not EcpConfig(1, 0).disabled)
    for bad in [(-1, 0), (0, 1.5)]:
        with pytest.raises(ConfigurationError):
            EcpConfig(*bad)


def test_row_active_counts():
    bits = np.zeros((1, 2, 3), dtype=np.uint8)
    bits[0, 1] = [1, 0, 1]
    g = _grid(bits)
    assert(list(row_active_counts(g)[:, 0]) == [0, 2])
    # activity, not magnitude
    bits = np.zeros((2, 2, 3), dtype=np.uint8)
    bits[:, :, 0] = 1
    bits[0, 0, 2] = 1
    g = _grid(bits, (2, 2))
    assert(g.tags[0, 0].tolist() == [4, 0, 1])
    assert(row_active_counts(g)[0, 0] == 2)


@pytest.mark.parametrize('seed', range(10))
def test_row_active_counts_brute_force(seed):
    rng = np.random.default_rng(seed)
    bits = (rng.random((6, 10, 5)) < 0.1).astype(np.uint8)
    g = _grid(bits, (2, 3))
    n_ab = row_active_counts(g)
    for bn in range(g.nbn):
        for bt in range(g.nbt):
            window = bits[bt * 2:bt * 2 + 2, bn * 3:bn * 3 + 3]
            assert(n_ab[bn, bt] == sum(window[:, :, d].any()
                                       for d in range(5)))


def test_prune_rule_is_strict():
    bits = np.zeros((1, 2, 4), dtype=np.uint8)
    bits[0, 0, :2] = 1
    bits[0, 1, :3] = 1
    g = _grid(bits)
    mask = ecp_prune(g, g, EcpConfig(3, 3))
    assert(list(mask.keep_q[:, 0]) == [False, True])
    assert(list(mask.keep_k[:, 0]) == [False, True])
    mask = ecp_prune(g, g, EcpConfig(0, 0))
    assert(mask.keep_q.all())


def test_prune_shape_mismatch():
    a = _grid(np.ones((2, 4, 3), dtype=np.uint8), (2, 2))
    with pytest.raises(ShapeError):
        ecp_prune(a, _grid(np.ones((2, 4, 3), dtype=np.uint8), (1, 2)),
                  EcpConfig(1, 1))
    with pytest.raises(ShapeError):
        ecp_prune(a, _grid(np.ones((2, 4, 2), dtype=np.uint8), (2, 2)),
                  EcpConfig(1, 1))


def test_threshold_above_head_width_warns():
    g = _grid(np.ones((1, 2, 3), dtype=np.uint8))
    with pytest.warns(UserWarning):
        mask = ecp_prune(g, g, EcpConfig(4, 0))
    assert(not mask.keep_q.any())


def test_token_views():
    rng = np.random.default_rng(0)
    bits = (rng.random((5, 7, 4)) < 0.3).astype(np.uint8)
    g = _grid(bits, (2, 3))
    mask = ecp_prune(g, g, EcpConfig(2, 3))
    assert(mask.q_tokens.shape == (5, 7))
    assert(mask.s_mask.shape == (5, 7, 7))
    for t in range(5):
        for n in range(7):
            assert(mask.q_tokens[t, n] == mask.keep_q[n // 3, t // 2])
            assert(mask.k_tokens[t, n] == mask.keep_k[n // 3, t // 2])
    r, c = 3, 5
    assert(np.array_equal(mask.s_mask[:, r, c],
                          mask.q_tokens[:, r] & mask.k_tokens[:, c]))
    assert(np.array_equal(mask.y_rows, mask.q_tokens))
    assert(np.array_equal(mask.v_rows, mask.k_tokens))


@pytest.mark.parametrize('fq,fk', [(0.2, 0.1), (0.5, 0.5), (1.0, 0.3),
                                   (0.0, 1.0), (0.75, 0.25)])
def test_compounding_identity(fq, fk):
    '''Keeping fractions fq and fk of the rows leaves fq * fk of the score
    work.'''
    T, N, dh = 4, 100, 8
    q = np.zeros((T, N, dh), dtype=np.uint8)
    k = np.zeros((T, N, dh), dtype=np.uint8)
    q[:, :int(fq * N)] = 1
    k[:, :int(fk * N)] = 1
    shape = (T, 1)
    mask = ecp_prune(_grid(q, shape), _grid(k, shape), EcpConfig(1, 1))
    assert(mask.keep_fraction_q == pytest.approx(fq))
    assert(mask.keep_fraction_k == pytest.approx(fk))
    ops = mask.op_count()
    assert(ops.s_macs_baseline == T * N * N * dh)
    assert(ops.s_macs == int(fq * N) * int(fk * N) * dh * T)
    assert(ops.s_macs / ops.s_macs_baseline == pytest.approx(fq * fk))
    assert(ops.sv_macs == ops.s_macs)
    assert(ops.v_reads == int(fk * N) * T * dh)
    assert(ops.y_writebacks == int(fq * N) * T * dh)


def test_two_percent_case():
    T, N, dh = 2, 50, 4
    q = np.zeros((T, N, dh), dtype=np.uint8)
    k = np.zeros((T, N, dh), dtype=np.uint8)
    q[:, :10] = 1
    k[:, :5] = 1
    mask = ecp_prune(_grid(q, (T, 1)), _grid(k, (T, 1)), EcpConfig(1, 1))
    ops = mask.op_count()
    assert(ops.s_macs * 50 == ops.s_macs_baseline)


def test_pruned_attention_extremes():
    rng = np.random.default_rng(4)
    q, k, v = ((rng.random((3, 6, 4)) < 0.5).astype(np.uint8)
               for _ in range(3))
    shape = (1, 2)
    keep = ecp_prune(_grid(q, shape), _grid(k, shape), EcpConfig(0, 0))
    y, ops = pruned_attention(q, k, v, keep)
    assert(np.array_equal(y, _full_s(q, k) @ v.astype(np.int64)))
    assert(ops.s_macs == ops.s_macs_baseline)
    drop = ecp_prune(_grid(q, shape), _grid(k, shape), EcpConfig(5, 0))
    y, ops = pruned_attention(q, k, v, drop)
    assert(not y.any())
    assert(ops.s_macs == 0)
    assert(ops.y_writebacks == 0)
    with pytest.raises(ShapeError):
        pruned_attention(q[:, :4], k[:, :4], v[:, :4], keep)


@pytest.mark.parametrize('seed', range(1000))
def test_soundness(seed):
    '''Every dropped score is below its threshold.'''
    rng = np.random.default_rng(seed)
    T = int(rng.integers(1, 5))
    N = int(rng.integers(1, 9))
    dh = int(rng.integers(1, 13))
    theta_q, theta_k = (int(t) for t in rng.integers(1, 9, 2))
    shape = (int(rng.integers(1, 3)), int(rng.integers(1, 4)))
    q = (rng.random((T, N, dh)) < rng.random() * 0.5).astype(np.uint8)
    k = (rng.random((T, N, dh)) < rng.random()).astype(np.uint8)
    mask = ecp_prune(_grid(q, shape), _grid(k, shape),
                     EcpConfig(theta_q, theta_k))
    full = _full_s(q, k)
    for t in range(T):
        for r in range(N):
            for c in range(N):
                if not mask.q_tokens[t, r]:
                    assert(full[t, r, c] < theta_q)
                if not mask.k_tokens[t, c]:
                    assert(full[t, r, c] < theta_k)
    eq, ek = error_bound_check(full, mask)
    assert(eq < theta_q or eq == 0)
    assert(ek < theta_k or ek == 0)
    y, _ = pruned_attention(q, k, v=q, mask=mask)
    kept = mask.q_tokens
    y_full = full * mask.s_mask
    assert(np.array_equal(y[kept], (y_full @ q.astype(np.int64))[kept]))


def test_error_bound_check():
    q = np.zeros((1, 2, 4), dtype=np.uint8)
    q[0, 0, 0] = 1
    q[0, 1] = 1
    g = _grid(q)
    mask = ecp_prune(g, g, EcpConfig(2, 0))
    full = _full_s(q, q)
    assert(error_bound_check(full, mask) == (1, 0))
    assert(error_bound_check(full, ecp_prune(g, g, EcpConfig())) == (0, 0))
    forged = full.copy()
    forged[0, 0, 1] = 3
    with pytest.raises(OracleMismatchError) as e:
        error_bound_check(forged, mask)
    assert(e.value.coordinate == (0, 0, 1))
    assert(e.value.actual == 3)


@pytest.mark.parametrize('seed', range(5))
def test_monotonic_in_threshold(seed):
    rng = np.random.default_rng(seed)
    q = (rng.random((4, 12, 8)) < 0.2).astype(np.uint8)
    k = (rng.random((4, 12, 8)) < 0.3).astype(np.uint8)
    gq, gk = _grid(q, (2, 2)), _grid(k, (2, 2))
    last = None
    for theta in range(0, 9):
        ops = ecp_prune(gq, gk, EcpConfig(theta, theta)).op_count()
        if last is not None:
            assert(ops.s_macs <= last.s_macs)
            assert(ops.v_reads <= last.v_reads)
            assert(ops.y_writebacks <= last.y_writebacks)
        last = ops


def test_prune_heads():
    rng = np.random.default_rng(2)
    q = (rng.random((2, 6, 8)) < 0.3).astype(np.uint8)
    gq = _grid(q, (2, 2))
    masks = prune_heads(gq, gq, 2, EcpConfig(2, 2))
    assert(len(masks) == 2)
    for h, m in enumerate(masks):
        sub = _grid(q[..., h * 4:(h + 1) * 4], (2, 2))
        assert(np.array_equal(m.n_ab_q, row_active_counts(sub)))
        assert(m.dh == 4)
