#!/usr/bin/env python
# -*- coding: utf-8 -*-
import struct
import numpy as np
from ttbsim.exceptions import ShapeError
from ._kernels import count_range


def _pack(flat):
    packed = np.packbits(flat, bitorder='little')
    pad = -len(packed) % 8
    if pad:
        packed = np.concatenate((packed, np.zeros(pad, dtype=np.uint8)))
    return packed.view('<u8')


class SpikeTensor:
    '''Binary activations over time points, tokens, and features.

    The bits are laid out t-major, then token, then feature, and packed
    little-endian into 64-bit words. Instances are immutable.

    Parameters
    ----------
    bits: array-like of shape (T, N, D)
        Spike values, each 0 or 1.
    '''

    def __init__(self, bits):
        bits = np.asarray(bits)
        if bits.ndim != 3:
            raise ShapeError(
                f'A spike tensor needs 3 axes (T, N, D), got {bits.shape}.'
            )
        if min(bits.shape) < 1:
            raise ShapeError(f'Empty spike tensor of shape {bits.shape}.')
        if bits.dtype != np.bool_ and np.any((bits != 0) & (bits != 1)):
            raise ValueError('Spike tensors may only hold 0 and 1.')
        self._shape = tuple(int(s) for s in bits.shape)
        self._words = _pack(bits.astype(np.bool_).ravel())
        self._words.flags.writeable = False

    @classmethod
    def from_words(cls, shape, words):
        '''Wrap already-packed words without unpacking them.'''
        T, N, D = (int(s) for s in shape)
        if min(T, N, D) < 1:
            raise ShapeError(f'Empty spike tensor of shape {shape}.')
        words = np.array(words, dtype='<u8').ravel()
        nwords = -(-T * N * D // 64)
        if len(words) != nwords:
            raise ShapeError(
                f'{len(words)} words cannot hold a {T}x{N}x{D} tensor, '
                f'expected {nwords}.'
            )
        tail = T * N * D % 64
        if tail and words[-1] >> np.uint64(tail):
            raise ValueError('Padding bits past the last element are set.')
        x = cls.__new__(cls)
        x._shape = (T, N, D)
        x._words = words
        x._words.flags.writeable = False
        return x

    @classmethod
    def zeros(cls, T, N, D):
        return cls.from_words((T, N, D), np.zeros(-(-T * N * D // 64)))

    @property
    def shape(self):
        return self._shape

    @property
    def T(self):
        return self._shape[0]

    @property
    def N(self):
        return self._shape[1]

    @property
    def D(self):
        return self._shape[2]

    @property
    def size(self):
        return self.T * self.N * self.D

    @property
    def words(self):
        '''Read-only view of the packed 64-bit words.'''
        return self._words

    def to_numpy(self, dtype=np.uint8):
        flat = np.unpackbits(self._words.view(np.uint8), count=self.size,
                             bitorder='little')
        return flat.reshape(self._shape).astype(dtype, copy=False)

    def count(self, t=slice(None), n=slice(None), d=slice(None)):
        '''Number of spikes in a contiguous sub-box.

        Parameters
        ----------
        t, n, d: slice or int
            Ranges along each axis, with unit step.

        Returns
        -------
        count: int
            Population count of the selected elements.
        '''
        bounds = []
        for r, extent in zip((t, n, d), self._shape):
            if isinstance(r, slice):
                start, stop, step = r.indices(extent)
                if step != 1:
                    raise ValueError('Only unit-step ranges can be counted.')
            else:
                start = int(r) + extent if r < 0 else int(r)
                if not 0 <= start < extent:
                    raise IndexError(f'Index {r} out of range [0, {extent}).')
                stop = start + 1
            bounds.append((start, max(start, stop)))
        (t0, t1), (n0, n1), (d0, d1) = bounds
        return int(count_range(self._words, self.N, self.D,
                               t0, t1, n0, n1, d0, d1))

    def popcount(self):
        return int(np.unpackbits(self._words.view(np.uint8)).sum())

    def density(self):
        return self.popcount() / self.size

    def select(self, features):
        '''Restrict to a subset of features, kept in the given order.'''
        return SpikeTensor(self.to_numpy()[:, :, np.asarray(features)])

    def to_bytes(self):
        nbytes = -(-self.size // 8)
        return self._words.view(np.uint8)[:nbytes].tobytes()

    @classmethod
    def from_bytes(cls, shape, data):
        T, N, D = shape
        flat = np.unpackbits(np.frombuffer(data, dtype=np.uint8),
                             count=T * N * D, bitorder='little')
        return cls(flat.reshape(T, N, D))

    def __eq__(self, other):
        if not isinstance(other, SpikeTensor):
            return NotImplemented
        return (self._shape == other._shape and
                np.array_equal(self._words, other._words))

    __hash__ = None

    def __repr__(self):
        T, N, D = self._shape
        return f'SpikeTensor(T={T}, N={N}, D={D}, spikes={self.popcount()})'


_HEADER = struct.Struct('<4sIII')


def write_ttbs(path, x):
    '''Write a spike tensor in the TTBS binary format: magic ``TTBS``, then
    little-endian uint32 T, N, D, then the packed bits.'''
    with open(path, 'wb') as f:
        f.write(_HEADER.pack(b'TTBS', *x.shape))
        f.write(x.to_bytes())


def read_ttbs(path):
    with open(path, 'rb') as f:
        data = f.read()
    if len(data) < _HEADER.size:
        raise ValueError(f'{path}: truncated TTBS header.')
    magic, T, N, D = _HEADER.unpack_from(data)
    if magic != b'TTBS':
        raise ValueError(f'{path}: bad magic {magic!r}, expected TTBS.')
    payload = data[_HEADER.size:]
    if len(payload) != -(-T * N * D // 8):
        raise ValueError(
            f'{path}: {len(payload)} payload bytes do not match '
            f'{T}x{N}x{D}.'
        )
    return SpikeTensor.from_bytes((T, N, D), payload)
