#!/usr/bin/env python
# -*- coding: utf-8 -*-
import numpy as np
import pytest
from ttbsim.exceptions import ConfigurationError, ShapeError
from ttbsim.reference import LifParams, LifState, lif_step, lif_layer


@pytest.mark.parametrize('v,i,leak,th,v_next,spike', [
    # integrate past the threshold: fire and reset
    (0.6, 0.5, 0.0, 1.0, 0.0, 1),
    # integrate and leak below the threshold: keep the potential
    (0.2, 0.3, 0.1, 1.0, 0.4, 0),
    # exactly at threshold: no spike
    (0.5, 0.5, 0.0, 1.0, 1.0, 0),
    (100, 160, 4, 256, 256, 0),
    (100, 160, 3, 256, 0, 1),
    (0, 0, 16, 256, -16, 0),
    (-20, 280, 16, 256, 244, 0),
    (255, 2, 0, 256, 0, 1),
])
def test_lif_step_table(v, i, leak, th, v_next, spike):
    p = LifParams(th, leak)
    state = LifState(np.array([v]))
    state, s = lif_step(state, p, np.array([i]))
    assert(s[0] == spike)
    if spike:
        assert(state.v[0] == 0)
    elif isinstance(v, float):
        assert(state.v[0] == pytest.approx(v_next))
    else:
        assert(state.v[0] == v + i - leak)


def test_lif_step_shape_mismatch():
    p = LifParams(1.0)
    with pytest.raises(ShapeError):
        lif_step(LifState(np.zeros(3)), p, np.zeros(4))


def test_lif_params_validation():
    with pytest.raises(ConfigurationError):
        LifParams(0)
    with pytest.raises(ConfigurationError):
        LifParams(-1.0)
    with pytest.raises(ConfigurationError):
        LifParams(1, -1)
    p = LifParams(4, 1)
    assert(p.v_init == 0)
    assert(p.is_integer)
    assert(not LifParams(4.0, 1).is_integer)
    assert(LifState.initial((2, 3), p).v.dtype == np.int64)


@pytest.mark.parametrize('seed', range(10))
def test_potential_conservation(seed):
    '''A neuron that never fires holds V_init + sum(I) - t * V_leak.'''
    rng = np.random.default_rng(seed)
    T, n = 12, 8
    p = LifParams(10 ** 6, int(rng.integers(0, 5)), int(rng.integers(-9, 9)))
    currents = rng.integers(-50, 50, (T, n))
    spikes, state = lif_layer(currents, p, LifState.initial(n, p))
    assert(not spikes.any())
    assert(np.array_equal(state.v,
                          p.v_init + currents.sum(axis=0) - T * p.v_leak))


def test_leak_accumulation_and_reset():
    p = LifParams(10, 1)
    currents = np.array([[4], [4], [4], [4], [0], [12]])
    spikes, state = lif_layer(currents, p)
    # 3, 6, 9, 12 > 10 fires, then 0 - 1 = -1, -1 + 12 - 1 = 10 does not
    assert(list(spikes[:, 0]) == [0, 0, 0, 1, 0, 0])
    assert(state.v[0] == 10)


def test_lif_layer_binary_and_deterministic():
    rng = np.random.default_rng(0)
    currents = rng.integers(-300, 600, (5, 4, 7))
    p = LifParams(256, 16)
    a, sa = lif_layer(currents, p)
    b, sb = lif_layer(currents, p)
    assert(a.dtype == np.uint8)
    assert(set(np.unique(a)) <= {0, 1})
    assert(np.array_equal(a, b))
    assert(np.array_equal(sa.v, sb.v))


def test_potential_overflow():
    p = LifParams(1)
    currents = np.full((3, 4), -2 ** 30, dtype=np.int64)
    _, state = lif_layer(currents[:2], p)
    assert(np.all(state.v == -2 ** 31))
    with pytest.raises(OverflowError):
        lif_layer(currents, p)
