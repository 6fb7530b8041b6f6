#!/usr/bin/env python
# -*- coding: utf-8 -*-
from collections import namedtuple, OrderedDict
import numpy as np
from ttbsim.ttb import SpikeTensor
from .attention import ssa_forward
from .linear import check_int32, linear_project
from .lif import lif_layer

LayerTrace = namedtuple('LayerTrace', [
    'name', 'role', 'x', 'weight', 'current', 'bias', 'spikes'
])
LayerTrace.__doc__ = '''Inputs and outputs of one LIF layer.

``current`` is the product ``x @ weight`` (the attention output for the
``attn`` role, where x and weight are None). ``bias`` is the residual current
added before the neurons, or None. ``spikes`` is the layer output.'''

BlockTrace = namedtuple('BlockTrace', ['name', 'layers', 'ssa', 'output'])


def _residual(x, gain):
    return gain * x.to_numpy(np.int64)


def block_forward(x, w, cfg, states=None, ecp=None, shape=None, name='block'):
    '''One encoder block: spiking self-attention followed by a two-layer
    spiking MLP, each with a residual connection added as input current.

    The layers compute, with ``g`` the residual gain of the receiving role::

        X1  = LIF_proj(O_temp @ W_O + g * X)
        H1  = LIF_mlp1(X1 @ W_mlp1)
        out = LIF_mlp2(H1 @ W_mlp2 + g * X1)

    Returns
    -------
    out: SpikeTensor
    trace: BlockTrace
    '''
    states = {} if states is None else states
    ssa, _ = ssa_forward(x, w, cfg, states, ecp=ecp, shape=shape)
    layers = OrderedDict()
    for role in ('q', 'k', 'v'):
        layers[role] = LayerTrace(
            f'{name}.{role}', role, x, w.for_role(role),
            getattr(ssa, f'{role}_current'), None, getattr(ssa, role)
        )
    layers['attn'] = LayerTrace(f'{name}.attn', 'attn', None, None, ssa.y,
                                None, ssa.o_temp)

    def fire(role, h, tap):
        W = w.for_role(role)
        current = linear_project(h, W)
        bias = None if tap is None else _residual(tap, cfg.gain_for(role))
        total = current if bias is None else check_int32(current + bias)
        spikes, states[role] = lif_layer(total, cfg.lif_for(role),
                                         states.get(role))
        layers[role] = LayerTrace(f'{name}.{role}', role, h, W, current,
                                  bias, SpikeTensor(spikes))
        return layers[role].spikes

    x1 = fire('proj', ssa.o_temp, x)
    h1 = fire('mlp1', x1, None)
    out = fire('mlp2', h1, x1)
    return out, BlockTrace(name, layers, ssa, out)


def model_forward(x, weights, cfg, ecp=None, shape=None):
    '''Run ``len(weights)`` blocks in sequence, each starting from fresh
    neuron states.

    Returns
    -------
    out: SpikeTensor
    traces: list of BlockTrace
    '''
    traces = []
    for i, w in enumerate(weights):
        x, trace = block_forward(x, w, cfg, ecp=ecp, shape=shape,
                                 name=f'block{i}')
        traces.append(trace)
    return x, traces
