#!/usr/bin/env python
# -*- coding: utf-8 -*-
from collections import namedtuple
import numpy as np
from ttbsim.exceptions import ShapeError
from ttbsim.ttb import SpikeTensor, pack_ttb
from ttbsim.ecp import prune_heads
from .lif import lif_layer
from .linear import linear_project

SsaTrace = namedtuple('SsaTrace', [
    'q', 'k', 'v', 'q_current', 'k_current', 'v_current',
    's_full', 's', 'y', 'o_temp', 'o_attn', 'masks', 'states'
])
SsaTrace.__doc__ = '''Intermediate tensors of one spiking self-attention.

Attributes
----------
q, k, v: SpikeTensor
    Binary queries, keys and values over all heads, (T, N, D).
q_current, k_current, v_current: ndarray
    Projection currents feeding the Q/K/V neurons.
s_full: ndarray of shape (H, T, N, N)
    Unpruned attention scores.
s: ndarray of shape (H, T, N, N)
    Scores after pruning, equal to s_full without pruning.
y: ndarray of shape (T, N, D)
    Concatenated head outputs ``(s >> s_shift) @ v``.
o_temp: SpikeTensor
    Attention neuron output.
o_attn: ndarray
    ``o_temp @ W_O``.
masks: list of PruneMask or None
states: dict
    Final LIF state per role.
'''


def head_slices(cfg):
    return [slice(h * cfg.dh, (h + 1) * cfg.dh) for h in range(cfg.H)]


def attention_scores(q, k):
    '''``q @ k.T`` per time point. q, k are binary (T, N, dh) arrays.'''
    q = np.asarray(q, dtype=np.int64)
    k = np.asarray(k, dtype=np.int64)
    return q @ k.transpose(0, 2, 1)


def ssa_forward(x, w, cfg, states=None, ecp=None, shape=None):
    '''Multi-head spiking self-attention.

    Q, K and V are the spikes of LIF neurons fed by linear projections of x.
    Per head and time point the scores are ``S = Q K^T``; they are scaled by
    an arithmetic right shift and multiplied with V. The concatenated head
    outputs drive one more LIF layer whose spikes are projected by W_O.

    Parameters
    ----------
    x: SpikeTensor
        Input of shape (T, N, D).
    w: BlockWeights
        Weights of the block.
    cfg: ModelConfig
        Model shape and neuron parameters.
    states: dict or None
        Initial LIF state per role, fresh states when omitted. Updated in
        place with the final states.
    ecp: EcpConfig or None
        When given, query/key bundle rows are pruned per head and dropped
        scores read as zero.
    shape: BundleShape
        Bundle shape used for pruning; required together with ``ecp``.

    Returns
    -------
    trace: SsaTrace
    o_attn: ndarray of int64
    '''
    if x.shape != (cfg.T, cfg.N, cfg.D):
        raise ShapeError(
            f'Input of shape {x.shape} does not match the model '
            f'{(cfg.T, cfg.N, cfg.D)}.'
        )
    states = {} if states is None else states
    spikes = {}
    currents = {}
    for role in ('q', 'k', 'v'):
        currents[role] = linear_project(x, w.for_role(role))
        spikes[role], states[role] = lif_layer(
            currents[role], cfg.lif_for(role), states.get(role)
        )
    q, k, v = (SpikeTensor(spikes[r]) for r in ('q', 'k', 'v'))

    masks = None
    if ecp is not None and not ecp.disabled:
        if shape is None:
            raise ValueError('A bundle shape is required for pruning.')
        masks = prune_heads(pack_ttb(q, shape), pack_ttb(k, shape), cfg.H,
                            ecp)

    s_full = np.empty((cfg.H, cfg.T, cfg.N, cfg.N), dtype=np.int64)
    y = np.zeros((cfg.T, cfg.N, cfg.D), dtype=np.int64)
    for h, f in enumerate(head_slices(cfg)):
        s_full[h] = attention_scores(spikes['q'][..., f], spikes['k'][..., f])
        s_h = s_full[h] if masks is None else s_full[h] * masks[h].s_mask
        y[..., f] = (s_h >> cfg.s_shift) @ spikes['v'][..., f].astype(np.int64)
    if masks is None:
        s = s_full
    else:
        s = s_full * np.stack([m.s_mask for m in masks])

    o_temp, states['attn'] = lif_layer(y, cfg.lif_for('attn'),
                                       states.get('attn'))
    o_temp = SpikeTensor(o_temp)
    o_attn = linear_project(o_temp, w.w_o)
    trace = SsaTrace(q, k, v, currents['q'], currents['k'], currents['v'],
                     s_full, s, y, o_temp, o_attn, masks, states)
    return trace, o_attn

