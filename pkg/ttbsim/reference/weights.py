#!/usr/bin/env python
# -*- coding: utf-8 -*-
import os
import struct
from collections import namedtuple
import numpy as np
from ttbsim.exceptions import ConfigurationError, ShapeError

_ROLE_WEIGHT = {'q': 'w_q', 'k': 'w_k', 'v': 'w_v', 'proj': 'w_o',
                'mlp1': 'w_mlp1', 'mlp2': 'w_mlp2'}


class BlockWeights(namedtuple('BlockWeights', [
    'w_q', 'w_k', 'w_v', 'w_o', 'w_mlp1', 'w_mlp2'
])):
    '''Signed integer weights of one encoder block. ``w_mlp1`` is D x hidden
    and ``w_mlp2`` is hidden x D, all others D x D.'''

    @classmethod
    def random(cls, cfg, rng):
        '''Uniform signed integers over the full range of
        ``cfg.weight_bits``.'''
        lo, hi = weight_range(cfg.weight_bits)
        D, Hd = cfg.D, cfg.hidden
        shapes = [(D, D)] * 4 + [(D, Hd), (Hd, D)]
        return cls(*[rng.integers(lo, hi, size=s, endpoint=True,
                                  dtype=np.int64) for s in shapes])

    def for_role(self, role):
        return getattr(self, _ROLE_WEIGHT[role])

    def check(self, cfg):
        D, Hd = cfg.D, cfg.hidden
        expected = [(D, D)] * 4 + [(D, Hd), (Hd, D)]
        lo, hi = weight_range(cfg.weight_bits)
        for name, w, s in zip(self._fields, self, expected):
            if w.shape != s:
                raise ShapeError(f'{name} has shape {w.shape}, expected {s}.')
            if w.size and (w.min() < lo or w.max() > hi):
                raise ConfigurationError(
                    f'{name} exceeds the {cfg.weight_bits}-bit weight range.'
                )


def weight_range(bits):
    return -(1 << (bits - 1)), (1 << (bits - 1)) - 1


_HEADER = struct.Struct('<4sIII')
_DTYPES = {1: '<i1', 2: '<i2'}


def write_ttbw(path, w, bits=8):
    '''Write an integer matrix in the TTBW format: magic ``TTBW``,
    little-endian uint32 rows, cols and bit width, then the row-major
    values, each in ``ceil(bits/8)`` little-endian bytes.'''
    w = np.asarray(w)
    if w.ndim != 2:
        raise ShapeError(f'TTBW holds matrices, got shape {w.shape}.')
    if not 4 <= bits <= 16:
        raise ConfigurationError(f'Unsupported weight width {bits}.')
    lo, hi = weight_range(bits)
    if w.size and (w.min() < lo or w.max() > hi):
        raise ValueError(f'Weights exceed the {bits}-bit signed range.')
    with open(path, 'wb') as f:
        f.write(_HEADER.pack(b'TTBW', *w.shape, bits))
        f.write(w.astype(_DTYPES[-(-bits // 8)]).tobytes())


def read_ttbw(path):
    '''Returns
    -------
    w: ndarray of int64
    bits: int
    '''
    with open(path, 'rb') as f:
        data = f.read()
    if len(data) < _HEADER.size:
        raise ValueError(f'{path}: truncated TTBW header.')
    magic, rows, cols, bits = _HEADER.unpack_from(data)
    if magic != b'TTBW':
        raise ValueError(f'{path}: bad magic {magic!r}, expected TTBW.')
    if not 4 <= bits <= 16:
        raise ValueError(f'{path}: unsupported weight width {bits}.')
    dtype = np.dtype(_DTYPES[-(-bits // 8)])
    payload = data[_HEADER.size:]
    if len(payload) != rows * cols * dtype.itemsize:
        raise ValueError(
            f'{path}: {len(payload)} payload bytes do not match a '
            f'{rows}x{cols} matrix of {bits}-bit values.'
        )
    w = np.frombuffer(payload, dtype=dtype).astype(np.int64)
    return w.reshape(rows, cols), bits


def save_weights(directory, weights, bits=8):
    '''Write the weights of every block as ``block<i>.<name>.ttbw``.'''
    os.makedirs(directory, exist_ok=True)
    for i, block in enumerate(weights):
        for name, w in zip(block._fields, block):
            write_ttbw(os.path.join(directory, f'block{i}.{name}.ttbw'), w,
                       bits)


def load_weights(directory, cfg):
    '''Read the weights of ``cfg.L`` blocks written by
    :py:func:`save_weights`, checking shapes and width against cfg.'''
    blocks = []
    for i in range(cfg.L):
        mats = []
        for name in BlockWeights._fields:
            path = os.path.join(directory, f'block{i}.{name}.ttbw')
            if not os.path.exists(path):
                raise ConfigurationError(f'Missing weight file {path}.')
            w, _ = read_ttbw(path)
            mats.append(w)
        block = BlockWeights(*mats)
        block.check(cfg)
        blocks.append(block)
    return blocks
