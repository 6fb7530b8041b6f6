#!/usr/bin/env python
# -*- coding: utf-8 -*-
import math
import re
from collections import namedtuple
import numpy as np
from ttbsim.exceptions import ConfigurationError
from .tensor import SpikeTensor

_MAX_VOLUME = np.iinfo(np.uint16).max


class BundleShape(namedtuple('BundleShape', ['bs_t', 'bs_n'])):
    '''Extent of a token-time bundle: ``bs_t`` time points by ``bs_n``
    tokens.'''

    def __new__(cls, bs_t, bs_n):
        bs_t, bs_n = int(bs_t), int(bs_n)
        if bs_t < 1 or bs_n < 1:
            raise ConfigurationError(
                f'Bundle extents must be positive, got {bs_t}x{bs_n}.'
            )
        if bs_t * bs_n > _MAX_VOLUME:
            raise ConfigurationError(
                f'Bundle volume {bs_t * bs_n} exceeds the 16-bit tag range.'
            )
        return super().__new__(cls, bs_t, bs_n)

    @property
    def volume(self):
        return self.bs_t * self.bs_n

    @classmethod
    def parse(cls, text):
        '''Parse a ``'BTxBN'`` string such as ``'2x4'``.'''
        m = re.fullmatch(r'\s*(\d+)\s*[xX]\s*(\d+)\s*', str(text))
        if m is None:
            raise ConfigurationError(f'Cannot parse bundle shape {text!r}.')
        return cls(int(m.group(1)), int(m.group(2)))

    @classmethod
    def from_volume(cls, volume, T=None):
        '''The most square shape of a given volume, with the time extent
        being the largest divisor of the volume not exceeding its square root
        (nor T, when given).'''
        volume = int(volume)
        if volume < 1:
            raise ConfigurationError(f'Invalid bundle volume {volume}.')
        limit = math.isqrt(volume)
        if T is not None:
            limit = min(limit, int(T))
        bs_t = max(b for b in range(1, limit + 1) if volume % b == 0)
        return cls(bs_t, volume // bs_t)

    def __str__(self):
        return f'{self.bs_t}x{self.bs_n}'


class TTBGrid:
    '''Spike activations re-indexed into token-time bundles, with one
    activity tag per bundle and feature.

    Parameters
    ----------
    shape: BundleShape
        Bundle extents.
    cells: ndarray of shape (nBN, nBT, BS_t, BS_n, D)
        Boolean bundle contents. Cells past the end of the source tensor are
        padding and must be False.
    T, N: int
        Extents of the source tensor.
    backing: SpikeTensor or None
        The source tensor, reconstructed on demand when omitted.
    '''

    def __init__(self, shape, cells, T, N, backing=None):
        self.shape = BundleShape(*shape)
        cells = np.asarray(cells, dtype=np.bool_)
        assert cells.ndim == 5
        assert cells.shape[2:4] == tuple(self.shape)
        self._cells = cells
        self._cells.flags.writeable = False
        self.T = int(T)
        self.N = int(N)
        self._tags = cells.sum(axis=(2, 3), dtype=np.uint16)
        self._tags.flags.writeable = False
        self._backing = backing

    @property
    def nbn(self):
        return self._cells.shape[0]

    @property
    def nbt(self):
        return self._cells.shape[1]

    @property
    def D(self):
        return self._cells.shape[4]

    @property
    def bundle_count(self):
        '''Bundles per feature, i.e. the number of bundle rows.'''
        return self.nbn * self.nbt

    @property
    def tags(self):
        '''Spike count per bundle, indexed ``[bn, bt, d]``.'''
        return self._tags

    @property
    def active(self):
        return self._tags > 0

    @property
    def backing(self):
        if self._backing is None and self.D > 0:
            self._backing = self.unpack()
        return self._backing

    def bundle(self, bn, bt, d):
        '''The BS_t x BS_n cells of one bundle.'''
        return self._cells[bn, bt, :, :, d].astype(np.uint8)

    def active_bundles_per_feature(self):
        return self.active.sum(axis=(0, 1))

    def active_count(self):
        return int(self.active.sum())

    def payload_bits(self):
        '''Bits moved when only active bundles are transferred.'''
        return self.active_count() * self.shape.volume

    def tag_bits(self):
        '''One activity bit per bundle and feature.'''
        return self.bundle_count * self.D

    def row_bits(self):
        '''Per bundle-row size, in bits, of the TTB transfer format: an
        activity bitmap over features followed by the active bundles.'''
        payload = self.active.sum(axis=2) * self.shape.volume + self.D
        return payload.ravel().astype(np.int64)

    def select(self, features):
        '''A grid over a subset of features, kept in the given order.'''
        features = np.asarray(features, dtype=np.intp)
        return TTBGrid(self.shape, self._cells[..., features], self.T,
                       self.N)

    def unpack(self):
        '''Reconstruct the source spike tensor, dropping padding.'''
        bs_t, bs_n = self.shape
        dense = self._cells.transpose(1, 2, 0, 3, 4).reshape(
            self.nbt * bs_t, self.nbn * bs_n, self.D
        )
        return SpikeTensor(dense[:self.T, :self.N])

    def __repr__(self):
        return (f'TTBGrid(shape={self.shape}, nBN={self.nbn}, '
                f'nBT={self.nbt}, D={self.D}, active={self.active_count()})')


def pack_ttb(x, shape):
    '''Re-index a spike tensor into token-time bundles and tag each bundle
    with its spike count.

    Parameters
    ----------
    x: SpikeTensor
        Activations of shape (T, N, D).
    shape: BundleShape or (int, int)
        Bundle extents (BS_t, BS_n). Trailing bundles are zero-padded when
        the extents do not divide T or N.

    Returns
    -------
    grid: TTBGrid
        ``ceil(T/BS_t) * ceil(N/BS_n)`` bundles per feature.
    '''
    shape = BundleShape(*shape)
    T, N, D = x.shape
    nbt = -(-T // shape.bs_t)
    nbn = -(-N // shape.bs_n)
    padded = np.zeros((nbt * shape.bs_t, nbn * shape.bs_n, D), np.bool_)
    padded[:T, :N] = x.to_numpy(np.bool_)
    cells = padded.reshape(nbt, shape.bs_t, nbn, shape.bs_n, D)
    cells = np.ascontiguousarray(cells.transpose(2, 0, 1, 3, 4))
    return TTBGrid(shape, cells, T, N, backing=x)


def bundle_tag(grid, bn, bt, d):
    '''Spike count of bundle (bn, bt) of feature d.'''
    for name, i, extent in (('bn', bn, grid.nbn), ('bt', bt, grid.nbt),
                            ('d', d, grid.D)):
        if not 0 <= i < extent:
            raise IndexError(f'{name}={i} out of range [0, {extent}).')
    return int(grid.tags[bn, bt, d])
