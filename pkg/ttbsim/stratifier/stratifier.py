#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Dense/sparse stratification of input features by bundle activity.'''
from collections import namedtuple
import numpy as np
from ttbsim.exceptions import ConfigurationError, ShapeError
from ttbsim.ttb import SpikeTensor
from ttbsim.reference.lif import lif_layer
from ttbsim.reference.linear import check_int32


class Stratification:
    '''A split of the input features of one layer into a dense and a sparse
    partition, with the weight rows permuted to match.

    Attributes
    ----------
    theta_s: int
        A feature is dense iff it has more than theta_s active bundles.
    r_d, r_s: ndarray of int
        Ascending source indices of the dense and sparse features.
    x_d, x_s: TTBGrid
        The activations of each partition.
    w_d, w_s: ndarray
        ``W[r_d]`` and ``W[r_s]``.
    counts: ndarray of int
        Active bundles per source feature.
    '''

    def __init__(self, theta_s, r_d, r_s, grid, W, counts):
        self.theta_s = theta_s
        self.r_d = r_d
        self.r_s = r_s
        self.x_d = grid.select(r_d)
        self.x_s = grid.select(r_s)
        self.w_d = W[r_d]
        self.w_s = W[r_s]
        self.counts = counts

    @classmethod
    def dense_only(cls, grid, W):
        '''Route every feature to the dense partition.'''
        W = _check_weights(grid, W)
        counts = grid.active_bundles_per_feature()
        return cls(None, np.arange(grid.D), np.arange(0), grid, W, counts)

    @property
    def n_dense(self):
        return len(self.r_d)

    @property
    def n_sparse(self):
        return len(self.r_s)

    def __repr__(self):
        return (f'Stratification(theta_s={self.theta_s}, '
                f'dense={self.n_dense}, sparse={self.n_sparse})')


def _check_weights(grid, W):
    W = np.asarray(W)
    if W.ndim != 2 or W.shape[0] != grid.D:
        raise ShapeError(
            f'Weights of shape {W.shape} do not match {grid.D} input '
            'features.'
        )
    return W


def stratify(grid, W, theta_s):
    '''Classify each feature by its number of active bundles.

    Parameters
    ----------
    grid: TTBGrid
        Bundled input activations of a layer.
    W: array of shape (D, D_out)
        Layer weights.
    theta_s: int
        Features with more than theta_s active bundles are dense.

    Returns
    -------
    strat: Stratification
    '''
    W = _check_weights(grid, W)
    counts = grid.active_bundles_per_feature()
    dense = counts > theta_s
    return Stratification(int(theta_s), np.flatnonzero(dense),
                          np.flatnonzero(~dense), grid, W, counts)


class StratPolicy(namedtuple('StratPolicy', ['kind', 'theta_s'])):
    '''``fixed`` uses theta_s as given, ``balance`` searches for the
    threshold that evens out the estimated work of the two cores.'''

    def __new__(cls, kind='balance', theta_s=0):
        if kind not in ('fixed', 'balance'):
            raise ConfigurationError(
                f"strat.policy must be 'fixed' or 'balance', got {kind!r}."
            )
        if theta_s < 0:
            raise ConfigurationError(
                f'strat.theta_s must be non-negative, got {theta_s}.'
            )
        return super().__new__(cls, kind, int(theta_s))


def bundle_work(grid, dense):
    '''Default work estimate: the dense core visits every bundle of its
    features, the sparse core only the spikes of active ones.'''
    dense_work = grid.bundle_count * int(dense.sum())
    sparse_work = int(grid.tags[:, :, ~dense].sum())
    return dense_work, sparse_work


def choose_theta_s(grid, policy, estimator=bundle_work):
    '''Pick the stratification threshold of a layer.

    Parameters
    ----------
    grid: TTBGrid
        Bundled input activations.
    policy: StratPolicy
        ``fixed`` returns ``policy.theta_s``. ``balance`` tries 0 and every
        distinct per-feature active bundle count, and returns the one
        minimizing ``|dense - sparse|`` as reported by the estimator. Ties
        go to the larger threshold, i.e. the smaller dense set.
    estimator: callable
        ``estimator(grid, dense)`` with ``dense`` a boolean mask over
        features, returning the (dense, sparse) work estimates.

    Returns
    -------
    theta_s: int
    '''
    if policy.kind == 'fixed':
        return policy.theta_s
    counts = grid.active_bundles_per_feature()
    best, best_gap = 0, None
    for theta in np.unique(np.concatenate(([0], counts))):
        d, s = estimator(grid, counts > theta)
        gap = abs(d - s)
        if best_gap is None or gap <= best_gap:
            best, best_gap = int(theta), gap
    return best


def merge_and_fire(psum_dense, psum_sparse, p, states=None, bias=None):
    '''Add the partial sums of both cores, plus any residual current, and
    fire the neurons of a layer.

    Parameters
    ----------
    psum_dense, psum_sparse: arrays of shape (T, N, D_out)
    p: LifParams
    states: LifState or None
        Initial neuron state, fresh when omitted.
    bias: array or None
        Residual current of the same shape.

    Returns
    -------
    spikes: SpikeTensor
    state: LifState
    '''
    psum_dense = np.asarray(psum_dense)
    psum_sparse = np.asarray(psum_sparse)
    if psum_dense.shape != psum_sparse.shape or psum_dense.ndim != 3:
        raise ShapeError(
            f'Partial sums of shapes {psum_dense.shape} and '
            f'{psum_sparse.shape} cannot be merged.'
        )
    current = psum_dense + psum_sparse
    if bias is not None:
        current = current + bias
    spikes, state = lif_layer(check_int32(current), p, states)
    return SpikeTensor(spikes), state
