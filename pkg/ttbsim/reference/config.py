#!/usr/bin/env python
# -*- coding: utf-8 -*-
from dataclasses import dataclass, field
from typing import Dict, Optional
from ttbsim.exceptions import ConfigurationError
from .lif import LifParams

ROLES = ('q', 'k', 'v', 'attn', 'proj', 'mlp1', 'mlp2')
'''LIF layer roles of an encoder block, in execution order.'''


def _default_role_lif():
    return {'attn': LifParams(16, 1)}


@dataclass(frozen=True)
class ModelConfig:
    '''Shape and neuron parameters of a spiking transformer.

    Parameters
    ----------
    L: int
        Number of encoder blocks.
    T, N, D: int
        Time points, tokens and features.
    H: int
        Attention heads; must divide D.
    s_shift: int
        Attention scores are scaled by ``2**-s_shift`` through a right
        shift.
    mlp_ratio: int
        Hidden expansion of the MLP block.
    weight_bits: int
        Signed weight width, 4 to 16 bits.
    lif: LifParams
        Neuron parameters shared by all roles without an override.
    lif_roles: dict
        Per-role overrides, keyed by the names in :py:data:`ROLES`.
    residual_gain: int or None
        Current injected per residual spike. Defaults to the threshold of
        the receiving layer, so that a residual spike alone is enough to
        reach threshold.
    '''
    L: int = 1
    T: int = 4
    N: int = 16
    D: int = 32
    H: int = 1
    s_shift: int = 0
    mlp_ratio: int = 4
    weight_bits: int = 8
    lif: LifParams = LifParams(256, 16)
    lif_roles: Dict[str, LifParams] = field(default_factory=_default_role_lif)
    residual_gain: Optional[int] = None

    def __post_init__(self):
        for name in ('L', 'T', 'N', 'D', 'H', 'mlp_ratio'):
            if getattr(self, name) < 1:
                raise ConfigurationError(
                    f'model.{name} must be positive, got '
                    f'{getattr(self, name)}.'
                )
        if self.D % self.H:
            raise ConfigurationError(
                f'model.D={self.D} is not divisible by model.H={self.H}.'
            )
        if self.s_shift < 0:
            raise ConfigurationError(
                f'model.s_shift must be non-negative, got {self.s_shift}.'
            )
        if not 4 <= self.weight_bits <= 16:
            raise ConfigurationError(
                f'model.weight_bits must be within 4..16, got '
                f'{self.weight_bits}.'
            )
        unknown = set(self.lif_roles) - set(ROLES)
        if unknown:
            raise ConfigurationError(f'Unknown LIF roles {sorted(unknown)}.')

    @property
    def dh(self):
        '''Per-head feature width.'''
        return self.D // self.H

    @property
    def hidden(self):
        return self.mlp_ratio * self.D

    def lif_for(self, role):
        if role not in ROLES:
            raise ConfigurationError(f'Unknown LIF role {role!r}.')
        return self.lif_roles.get(role, self.lif)

    def gain_for(self, role):
        if self.residual_gain is not None:
            return self.residual_gain
        return self.lif_for(role).v_th
