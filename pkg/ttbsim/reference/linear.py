#!/usr/bin/env python
# -*- coding: utf-8 -*-
import numpy as np
from ttbsim.exceptions import ShapeError
from ttbsim.ttb import SpikeTensor

_I32 = np.iinfo(np.int32)


def as_bits(x):
    '''Binary activations as an ndarray, from a SpikeTensor or an array.'''
    if isinstance(x, SpikeTensor):
        return x.to_numpy()
    return np.asarray(x)


def check_int32(current, what='accumulator'):
    '''Raise OverflowError if integer currents leave the 32-bit range.'''
    if current.size and np.issubdtype(current.dtype, np.integer) and (
        current.min() < _I32.min or current.max() > _I32.max
    ):
        raise OverflowError(f'{what} exceeds the 32-bit signed range.')
    return current


def linear_project(x, W):
    '''Integer product of binary activations with a weight matrix, per time
    point and token.

    Parameters
    ----------
    x: SpikeTensor or array of shape (T, N, D_in)
        Binary activations.
    W: array of shape (D_in, D_out)
        Integer weights.

    Returns
    -------
    current: ndarray of shape (T, N, D_out), int64
        Sum of the weight rows selected by each spike vector.
    '''
    bits = as_bits(x)
    W = np.asarray(W)
    if W.ndim != 2 or bits.shape[-1] != W.shape[0]:
        raise ShapeError(
            f'Cannot project activations of shape {bits.shape} with '
            f'weights of shape {W.shape}.'
        )
    current = bits.astype(np.int64) @ W.astype(np.int64)
    return check_int32(current, 'linear projection')
