#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Leaky integrate-and-fire neurons with hard reset.'''
from collections import namedtuple
import numpy as np
from ttbsim.exceptions import ConfigurationError, ShapeError
from .linear import check_int32


class LifParams(namedtuple('LifParams', ['v_th', 'v_leak', 'v_init'])):
    '''Threshold, leak per time point and initial potential of a neuron
    population. Integer parameters keep the whole simulation in integer
    arithmetic.'''

    def __new__(cls, v_th, v_leak=0, v_init=0):
        if not v_th > 0:
            raise ConfigurationError(f'v_th must be positive, got {v_th}.')
        if not v_leak >= 0:
            raise ConfigurationError(
                f'v_leak must be non-negative, got {v_leak}.'
            )
        return super().__new__(cls, v_th, v_leak, v_init)

    @property
    def is_integer(self):
        return all(isinstance(v, (int, np.integer)) for v in self)


class LifState(namedtuple('LifState', ['v'])):
    '''Membrane potentials of a neuron population.'''

    @classmethod
    def initial(cls, shape, p):
        dtype = np.int64 if p.is_integer else np.float64
        return cls(np.full(shape, p.v_init, dtype=dtype))


def lif_step(state, p, current):
    '''Advance a population by one time point.

    The potential integrates the input current and leaks, ``V' = V + I -
    V_leak``. A neuron fires iff ``V' > V_th`` and its potential then resets
    to 0; otherwise ``V'`` is kept.

    Integer potentials must stay within the 32-bit signed range.

    Parameters
    ----------
    state: LifState
        Potentials before the step.
    p: LifParams
        Neuron parameters.
    current: array
        Input current per neuron, same shape as the state.

    Returns
    -------
    state: LifState
        Potentials after the step.
    spikes: ndarray of uint8
        Output spike per neuron.
    '''
    current = np.asarray(current)
    if current.shape != state.v.shape:
        raise ShapeError(
            f'Input current of shape {current.shape} does not match a LIF '
            f'state of shape {state.v.shape}.'
        )
    v = check_int32(state.v + current - p.v_leak, 'membrane potential')
    fired = v > p.v_th
    v = np.where(fired, 0, v).astype(v.dtype, copy=False)
    return LifState(v), fired.astype(np.uint8)


def lif_layer(currents, p, state=None):
    '''Run :py:func:`lif_step` over the leading (time) axis of
    ``currents``. Returns the stacked spikes and the final state.'''
    currents = np.asarray(currents)
    if state is None:
        state = LifState.initial(currents.shape[1:], p)
    spikes = np.empty(currents.shape, dtype=np.uint8)
    for t, current in enumerate(currents):
        state, spikes[t] = lif_step(state, p, current)
    return spikes, state
