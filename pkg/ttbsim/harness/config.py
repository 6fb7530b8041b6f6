#!/usr/bin/env python
# -*- coding: utf-8 -*-
import copy
import hashlib
import json
import os
from ttbsim.exceptions import ConfigurationError
from ttbsim.ttb import BundleShape
from ttbsim.reference import LifParams, ModelConfig, ROLES
from ttbsim.ecp import EcpConfig
from ttbsim.stratifier import StratPolicy, SpikeGenConfig, StratifierConfig
from ttbsim.core import DenseCoreConfig, SparseCoreConfig, AttnCoreConfig
from ttbsim.memsys import MemConfig, load_energy_table

MODES = ('heterogeneous', 'dense_only')

default_config = {
    'preset': None,
    # model shape and neurons
    'model': {
        'L': 1,
        'T': 4,
        'N': 16,
        'D': 32,
        'H': 1,
        's_shift': 0,
        'mlp_ratio': 4,
        'weight_bits': 8,
        'v_th': 256,
        'v_leak': 16,
        'v_init': 0,
        'lif_roles': {'attn': {'v_th': 16, 'v_leak': 1}},
        'residual_gain': None,
        # directory of block{i}.{name}.ttbw files, random weights if None
        'weights': None,
    },
    'bundle': {
        'shape': '2x4',
    },
    'strat': {
        'policy': 'balance',
        'theta_s': 0,
    },
    'ecp': {
        'theta_q': 0,
        'theta_k': 0,
    },
    'dense': {
        'rows': 16,
        'cols': 32,
        'lanes': 10,
        'e_pe': 0.1,
    },
    'sparse': {
        'units': 128,
        'out_par': 32,
        'e_op': 0.035,
        'overhead': 1,
    },
    'attn': {
        'rows': 16,
        'cols': 32,
        'groups': None,
        's_bits': 8,
        'e_and': 0.01,
        'e_sac': 0.02,
        'mode_switch': 1,
        'heads_parallel': 1,
        'lanes': 10,
    },
    'spikegen': {
        'lanes': 512,
        'e_update': 0.1,
    },
    'stratifier': {
        'comparators': 32,
        'e_compare': 0.01,
    },
    'mem': {
        'clock_mhz': 500.0,
        'dram_bandwidth': 153.6,
        'dram_power_mw': 323.9,
        'weight_glb_bytes': 144 * 1024,
        'weight_port_bits': 512,
        'ttb_glb_bytes': 12 * 1024,
        'ttb_glb_banks': 2,
        'ttb_word_bits': 64,
        # JSON energy table, the bundled calibration if None
        'energy_table': None,
    },
    'workload': {
        # 'synth', 'bimodal' or 'file'
        'kind': 'synth',
        'rate': 0.1,
        'cluster': 0.5,
        'dense_rate': 0.9,
        'sparse_rate': 0.02,
        'dense_fraction': 0.5,
        # TTBS file read when kind is 'file'
        'input': None,
    },
    'metrics': {
        'lam': 1.0,
        # count value bundles in the sparsity loss besides queries and keys
        'bsp_includes_v': False,
    },
    'run': {
        'mode': 'heterogeneous',
        'seed': 0,
        # roles to simulate, all of them if None
        'layers': None,
    },
}
'''Defaults of every configuration key, one namespace per component.'''


def _preset(L, T, N, D, H, theta, lam):
    return {
        'model': {'L': L, 'T': T, 'N': N, 'D': D, 'H': H},
        'ecp': {'theta_q': theta, 'theta_k': theta},
        'metrics': {'lam': lam},
    }


presets = {
    'model1': _preset(4, 10, 64, 384, 12, 6, 1.0),
    'model2': _preset(4, 8, 64, 384, 12, 6, 0.5),
    'model3': _preset(8, 4, 196, 128, 4, 6, 0.3),
    'model4': _preset(2, 20, 64, 128, 4, 10, 1.0),
    'model5': _preset(4, 8, 256, 384, 12, 6, 1.0),
}
'''Model shapes with their reported pruning thresholds and sparsity penalty
weights.'''

# replaced as a whole rather than merged key by key
_LEAVES = {'model.lif_roles'}
_PATHS = ('model.weights', 'mem.energy_table', 'workload.input')


def _merge(base, update, prefix=''):
    for key, value in update.items():
        dotted = f'{prefix}{key}'
        if key not in base:
            raise ConfigurationError(f'Unknown configuration key {dotted!r}.')
        if isinstance(base[key], dict) and dotted not in _LEAVES:
            if not isinstance(value, dict):
                raise ConfigurationError(
                    f'Configuration key {dotted!r} must be a mapping.'
                )
            _merge(base[key], value, dotted + '.')
        else:
            base[key] = copy.deepcopy(value)
    return base


def _get(d, dotted):
    for key in dotted.split('.'):
        d = d[key]
    return d


def _set(d, dotted, value):
    *head, last = dotted.split('.')
    for key in head:
        d = d[key]
    d[last] = value


def merge_config(user):
    '''Defaults, overridden by the preset the user names, overridden by the
    user's own settings.'''
    user = dict(user)
    merged = copy.deepcopy(default_config)
    preset = user.get('preset')
    if preset is not None:
        if preset not in presets:
            raise ConfigurationError(
                f'Unknown preset {preset!r}, expected one of '
                f'{sorted(presets)}.'
            )
        _merge(merged, presets[preset])
    return _merge(merged, user)


def load_config(source=None, overrides=None):
    '''Build a :py:class:`RunConfig`.

    Parameters
    ----------
    source: str, dict or None
        A JSON file or an already-parsed mapping. Relative file paths in a
        file are resolved against the file's directory.
    overrides: dict or None
        Dotted keys such as ``{'run.mode': 'dense_only'}`` applied last.
    '''
    base = os.getcwd()
    if source is None:
        user = {}
    elif isinstance(source, dict):
        user = source
    else:
        with open(source) as f:
            try:
                user = json.load(f)
            except json.JSONDecodeError as e:
                raise ConfigurationError(
                    f'{source} is not valid JSON: {e}'
                ) from e
        base = os.path.dirname(os.path.abspath(source))
    if not isinstance(user, dict):
        raise ConfigurationError('A configuration must be a JSON object.')
    merged = merge_config(user)
    for key in _PATHS:
        path = _get(merged, key)
        if path is not None:
            _set(merged, key, os.path.normpath(os.path.join(base, path)))
    cfg = RunConfig(merged)
    return cfg.updated(overrides) if overrides else cfg


class RunConfig:
    '''Immutable, validated view of a merged configuration.

    Attributes
    ----------
    model: ModelConfig
    bundle: BundleShape
    strat: StratPolicy
    ecp: EcpConfig
    dense, sparse, attn: core configurations
    spikegen: SpikeGenConfig
    stratifier: StratifierConfig
    mem: MemConfig
    mode: str
        ``'heterogeneous'`` or ``'dense_only'``.
    seed: int
    workload: dict
    lam: float
    bsp_includes_v: bool
    layers: tuple of str
        Roles to simulate.
    '''

    def __init__(self, data):
        self._data = copy.deepcopy(data)
        d = self._data
        for key in _PATHS:
            path = _get(d, key)
            if path is not None and not os.path.exists(path):
                raise ConfigurationError(
                    f'{key} refers to a missing file {path!r}.'
                )
        m = d['model']
        try:
            roles = {
                role: LifParams(**p) for role, p in m['lif_roles'].items()
            }
        except TypeError as e:
            raise ConfigurationError(f'Invalid model.lif_roles: {e}') from e
        self.model = ModelConfig(
            L=m['L'], T=m['T'], N=m['N'], D=m['D'], H=m['H'],
            s_shift=m['s_shift'], mlp_ratio=m['mlp_ratio'],
            weight_bits=m['weight_bits'],
            lif=LifParams(m['v_th'], m['v_leak'], m['v_init']),
            lif_roles=roles, residual_gain=m['residual_gain'],
        )
        self.bundle = BundleShape.parse(d['bundle']['shape'])
        self.strat = StratPolicy(d['strat']['policy'], d['strat']['theta_s'])
        self.ecp = EcpConfig(**d['ecp'])
        wb = self.model.weight_bits
        self.dense = DenseCoreConfig(weight_bits=wb, **d['dense'])
        self.sparse = SparseCoreConfig(weight_bits=wb, **d['sparse'])
        self.attn = AttnCoreConfig(**d['attn'])
        self.spikegen = SpikeGenConfig(**d['spikegen'])
        self.stratifier = StratifierConfig(**d['stratifier'])
        mem = dict(d['mem'])
        table = mem.pop('energy_table')
        if table is not None:
            mem['energy'] = load_energy_table(table)
        self.mem = MemConfig(**mem)

        run = d['run']
        if run['mode'] not in MODES:
            raise ConfigurationError(
                f'run.mode must be one of {MODES}, got {run["mode"]!r}.'
            )
        self.mode = run['mode']
        if not isinstance(run['seed'], int) or not 0 <= run['seed'] < 2**64:
            raise ConfigurationError(
                f'run.seed must be a 64-bit unsigned integer, got '
                f'{run["seed"]!r}.'
            )
        self.seed = run['seed']
        layers = ROLES if run['layers'] is None else tuple(run['layers'])
        unknown = set(layers) - set(ROLES)
        if unknown or not layers:
            raise ConfigurationError(
                f'run.layers must be a non-empty subset of {ROLES}.'
            )
        self.layers = tuple(r for r in ROLES if r in layers)

        w = d['workload']
        if w['kind'] not in ('synth', 'bimodal', 'file'):
            raise ConfigurationError(
                f"workload.kind must be 'synth', 'bimodal' or 'file', got "
                f"{w['kind']!r}."
            )
        if w['kind'] == 'file' and w['input'] is None:
            raise ConfigurationError('workload.input is required for files.')
        self.workload = w
        self.lam = float(d['metrics']['lam'])
        self.bsp_includes_v = bool(d['metrics']['bsp_includes_v'])

    def to_dict(self):
        return copy.deepcopy(self._data)

    def updated(self, changes):
        '''A new configuration with dotted keys replaced.'''
        data = copy.deepcopy(self._data)
        for dotted, value in changes.items():
            try:
                old = _get(data, dotted)
            except (KeyError, TypeError):
                raise ConfigurationError(
                    f'Unknown configuration key {dotted!r}.'
                ) from None
            if isinstance(old, dict) and dotted not in _LEAVES:
                raise ConfigurationError(
                    f'{dotted!r} is a namespace, not a setting.'
                )
            _set(data, dotted, value)
        return RunConfig(data)

    @property
    def config_hash(self):
        '''SHA-256 of the canonical JSON form of the merged settings.'''
        text = json.dumps(self._data, sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(text.encode()).hexdigest()

    def __repr__(self):
        return (f'RunConfig(mode={self.mode}, model={self.model.L}x'
                f'{self.model.T}x{self.model.N}x{self.model.D}, '
                f'bundle={self.bundle}, hash={self.config_hash[:12]})')
