#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Error-constrained pruning of query and key bundle rows.

A bundle row is the set of bundles sharing one (bn, bt) position across all
features of a head. A query row with ``n_ab`` active bundles contributes at
most ``n_ab`` to any attention score, so dropping rows with ``n_ab`` below a
threshold bounds the error of every dropped score by that threshold.'''
import warnings
from collections import namedtuple
import numpy as np
from ttbsim.exceptions import ConfigurationError, ShapeError, \
    OracleMismatchError


class EcpConfig(namedtuple('EcpConfig', ['theta_q', 'theta_k'])):
    '''Pruning thresholds for query and key rows. A threshold of 0 disables
    pruning.'''

    def __new__(cls, theta_q=0, theta_k=0):
        for name, theta in (('theta_q', theta_q), ('theta_k', theta_k)):
            if int(theta) != theta or theta < 0:
                raise ConfigurationError(
                    f'ecp.{name} must be a non-negative integer, got {theta}.'
                )
        return super().__new__(cls, int(theta_q), int(theta_k))

    @property
    def disabled(self):
        return self.theta_q == 0 and self.theta_k == 0


OpCount = namedtuple('OpCount', [
    's_macs', 's_macs_baseline',
    'sv_macs', 'sv_macs_baseline',
    'v_reads', 'v_reads_baseline',
    'y_writebacks', 'y_writebacks_baseline',
])
OpCount.__doc__ = '''Work performed under a prune mask and without one.
MACs count single-bit products, reads and writebacks count elements.'''


def row_active_counts(grid):
    '''Number of features with an active bundle, per bundle row
    ``[bn, bt]``.'''
    return np.count_nonzero(grid.tags, axis=2)


def _expand(rows, shape, T, N):
    bs_t, bs_n = shape
    tokens = np.repeat(np.repeat(rows.T, bs_t, axis=0), bs_n, axis=1)
    return tokens[:T, :N]


class PruneMask:
    '''Keep/prune decisions for the query and key bundle rows of one head,
    with the token-level views the attention datapath needs.

    Attributes
    ----------
    keep_q, keep_k: ndarray of bool, shape (nBN, nBT)
        Whether each bundle row survives.
    n_ab_q, n_ab_k: ndarray of int, shape (nBN, nBT)
        Active bundles per row.
    '''

    def __init__(self, keep_q, keep_k, n_ab_q, n_ab_k, shape, T, N, dh,
                 config):
        self.keep_q = keep_q
        self.keep_k = keep_k
        self.n_ab_q = n_ab_q
        self.n_ab_k = n_ab_k
        self.shape = shape
        self.T = T
        self.N = N
        self.dh = dh
        self.config = config

    @property
    def q_tokens(self):
        '''(T, N) mask of query tokens whose rows are kept.'''
        return _expand(self.keep_q, self.shape, self.T, self.N)

    @property
    def k_tokens(self):
        return _expand(self.keep_k, self.shape, self.T, self.N)

    @property
    def s_mask(self):
        '''(T, N, N) mask of the scores that are computed.'''
        return self.q_tokens[:, :, None] & self.k_tokens[:, None, :]

    @property
    def v_rows(self):
        '''Value tokens that are read, i.e. those with a kept key.'''
        return self.k_tokens

    @property
    def y_rows(self):
        '''Output tokens that are written back.'''
        return self.q_tokens

    @property
    def keep_fraction_q(self):
        return float(self.keep_q.mean()) if self.keep_q.size else 0.0

    @property
    def keep_fraction_k(self):
        return float(self.keep_k.mean()) if self.keep_k.size else 0.0

    def op_count(self):
        kq = self.q_tokens.sum(axis=1).astype(np.int64)
        kk = self.k_tokens.sum(axis=1).astype(np.int64)
        dh = self.dh
        pairs = int((kq * kk).sum()) * dh
        base = self.T * self.N * self.N * dh
        return OpCount(
            s_macs=pairs, s_macs_baseline=base,
            sv_macs=pairs, sv_macs_baseline=base,
            v_reads=int(kk.sum()) * dh, v_reads_baseline=self.T * self.N * dh,
            y_writebacks=int(kq.sum()) * dh,
            y_writebacks_baseline=self.T * self.N * dh,
        )


def ecp_prune(qgrid, kgrid, cfg):
    '''Keep a query (key) bundle row iff its active bundle count is at least
    ``cfg.theta_q`` (``cfg.theta_k``).

    Parameters
    ----------
    qgrid, kgrid: TTBGrid
        Bundled queries and keys of one head.
    cfg: EcpConfig
        Thresholds.

    Returns
    -------
    mask: PruneMask
    '''
    if (qgrid.shape != kgrid.shape or qgrid.D != kgrid.D or
            (qgrid.T, qgrid.N) != (kgrid.T, kgrid.N)):
        raise ShapeError(
            f'Query grid {qgrid!r} and key grid {kgrid!r} do not match.'
        )
    if max(cfg) > qgrid.D:
        warnings.warn(
            f'ECP thresholds {tuple(cfg)} exceed the head width {qgrid.D}; '
            'every row will be pruned.'
        )
    n_ab_q = row_active_counts(qgrid)
    n_ab_k = row_active_counts(kgrid)
    return PruneMask(n_ab_q >= cfg.theta_q, n_ab_k >= cfg.theta_k,
                     n_ab_q, n_ab_k, qgrid.shape, qgrid.T, qgrid.N, qgrid.D,
                     cfg)


def prune_heads(qgrid, kgrid, H, cfg):
    '''One :py:func:`ecp_prune` mask per head, over contiguous feature
    slices of width ``D // H``.'''
    dh = qgrid.D // H
    masks = []
    for h in range(H):
        features = np.arange(h * dh, (h + 1) * dh)
        masks.append(ecp_prune(qgrid.select(features),
                               kgrid.select(features), cfg))
    return masks


def pruned_attention(q, k, v, mask, s_shift=0):
    '''Attention of one head restricted to the kept rows.

    Parameters
    ----------
    q, k, v: arrays of shape (T, N, dh)
        Binary queries, keys and values.
    mask: PruneMask
        Built from the same queries and keys.
    s_shift: int
        Right shift applied to each score before the value product.

    Returns
    -------
    y: ndarray of int64, shape (T, N, dh)
        Outputs, zero on pruned query rows.
    ops: OpCount
    '''
    q, k, v = (np.asarray(a, dtype=np.int64) for a in (q, k, v))
    for name, a in (('q', q), ('k', k), ('v', v)):
        if a.shape != (mask.T, mask.N, mask.dh):
            raise ShapeError(
                f'{name} of shape {a.shape} does not match a mask over '
                f'{(mask.T, mask.N, mask.dh)}.'
            )
    s = (q @ k.transpose(0, 2, 1)) * mask.s_mask
    y = (s >> s_shift) @ v
    return y, mask.op_count()


def error_bound_check(full_s, mask, cfg=None):
    '''Largest true score dropped by query pruning and by key pruning.

    Parameters
    ----------
    full_s: array of shape (T, N, N)
        Unpruned scores of one head.
    mask: PruneMask
    cfg: EcpConfig or None
        Thresholds to check against, those of the mask by default.

    Returns
    -------
    max_q_err, max_k_err: int
        0 when nothing is pruned.

    Raises
    ------
    OracleMismatchError
        If a dropped score reaches its threshold.
    '''
    cfg = cfg or mask.config
    full_s = np.asarray(full_s)
    errs = []
    for label, pruned, theta in (
        ('query', ~mask.q_tokens[:, :, None], cfg.theta_q),
        ('key', ~mask.k_tokens[:, None, :], cfg.theta_k),
    ):
        dropped = np.where(np.broadcast_to(pruned, full_s.shape), full_s, 0)
        worst = int(dropped.max()) if dropped.size else 0
        if worst and worst >= theta:
            coordinate = np.unravel_index(np.argmax(dropped), dropped.shape)
            raise OracleMismatchError(
                'ecp', 'S', coordinate, expected=f'< {theta}', actual=worst,
                message=f'A score dropped by {label} pruning at {coordinate}'
                        f' is {worst}, not below the threshold {theta}.'
            )
        errs.append(worst)
    return tuple(errs)
