#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Bit counting kernels over little-endian packed 64-bit words.'''
import numpy as np
import numba as nb

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


@nb.njit
def popcount64(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return np.int64((x * _H01) >> np.uint64(56))


@nb.njit
def count_bits(words, start, stop):
    '''Number of set bits with flat index in [start, stop).'''
    total = 0
    i = start
    while i < stop:
        lo = i & 63
        width = min(64 - lo, stop - i)
        word = words[i >> 6] >> np.uint64(lo)
        if width < 64:
            word &= (np.uint64(1) << np.uint64(width)) - np.uint64(1)
        total += popcount64(word)
        i += width
    return total


@nb.njit
def count_range(words, N, D, t0, t1, n0, n1, d0, d1):
    '''Number of set bits in the box [t0, t1) x [n0, n1) x [d0, d1) of a
    t-major, then n, then d bit layout.'''
    total = 0
    if d1 <= d0:
        return total
    for t in range(t0, t1):
        for n in range(n0, n1):
            base = (t * N + n) * D
            total += count_bits(words, base + d0, base + d1)
    return total
