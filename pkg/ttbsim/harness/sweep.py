#!/usr/bin/env python
# -*- coding: utf-8 -*-
import logging
from concurrent.futures import ProcessPoolExecutor
import pandas as pd
from tqdm import tqdm
from ttbsim.exceptions import ConfigurationError, TtbsimError
from ttbsim.ttb import BundleShape
from .run import run, make_inputs
from .synth import child_seeds

logger = logging.getLogger(__name__)

PARAMETERS = ('theta_s', 'bundle_volume', 'theta_p')


def point_changes(cfg, param, value):
    '''Configuration changes that set a sweep parameter.

    ``theta_s`` fixes the stratification threshold, ``bundle_volume``
    takes a volume (turned into the most square bundle shape that fits T)
    or an explicit ``'BTxBN'`` shape, and ``theta_p`` sets both pruning
    thresholds.'''
    if param == 'theta_s':
        return {'strat.policy': 'fixed', 'strat.theta_s': int(value)}
    if param == 'bundle_volume':
        if isinstance(value, str) and 'x' in value.lower():
            shape = BundleShape.parse(value)
        else:
            shape = BundleShape.from_volume(int(value), cfg.model.T)
        return {'bundle.shape': str(shape)}
    if param == 'theta_p':
        return {'ecp.theta_q': int(value), 'ecp.theta_k': int(value)}
    raise ConfigurationError(
        f'Unknown sweep parameter {param!r}, expected one of {PARAMETERS}.'
    )


def _run_point(cfg, inputs):
    try:
        return run(cfg, inputs), None
    except (TtbsimError, ValueError, ArithmeticError, RuntimeError) as e:
        if isinstance(e, TtbsimError):
            return None, e.to_dict()
        return None, {'error': type(e).__name__, 'message': str(e)}


class SweepResult:
    '''Reports of a parameter sweep, one per value, None where the run
    failed.'''

    def __init__(self, param, values, reports, errors):
        self.param = param
        self.values = list(values)
        self.reports = list(reports)
        self.errors = list(errors)

    @property
    def failed(self):
        return [v for v, e in zip(self.values, self.errors) if e is not None]

    def table(self):
        '''One row per sweep point, ready for plotting or CSV export.'''
        rows = []
        for value, r, e in zip(self.values, self.reports, self.errors):
            row = {self.param: value, 'ok': r is not None}
            if r is not None:
                keep_q, keep_k = r.keep_fractions()
                row.update(
                    cycles=r.cycles,
                    latency_s=r.latency_s,
                    energy_pj=r.energy_pj,
                    edp=r.edp,
                    keep_q=keep_q,
                    keep_k=keep_k,
                    weight_glb_reads=r.total('weight_glb_read'),
                    payload_bytes=r.dram_total('payload_bytes'),
                    tag_bytes=r.dram_total('tag_bytes'),
                    output_payload_bytes=r.dram_total(
                        'output_payload_bytes'),
                    dram_bytes=r.dram_total('read_bytes') +
                    r.dram_total('write_bytes'),
                )
            else:
                row['error'] = e['message']
            rows.append(row)
        return pd.DataFrame(rows)


def sweep(cfg, param, values, jobs=1, inputs=None, progress=False):
    '''Run one simulation per parameter value on the same workload.

    Parameters
    ----------
    cfg: RunConfig
        Base configuration.
    param: str
        One of :py:data:`PARAMETERS`.
    values: sequence
        Parameter values.
    jobs: int
        Number of worker processes; runs are independent.
    inputs: SpikeTensor or None
        Shared workload, synthesized once from the base configuration when
        omitted.
    progress: bool
        Show a progress bar.

    Returns
    -------
    result: SweepResult
        Failed points carry their error and do not stop the sweep.
    '''
    values = list(values)
    if not values:
        raise ConfigurationError('A sweep needs at least one value.')
    if param not in PARAMETERS:
        raise ConfigurationError(
            f'Unknown sweep parameter {param!r}, expected one of '
            f'{PARAMETERS}.'
        )
    if inputs is None:
        inputs = make_inputs(cfg, child_seeds(cfg.seed, 2)[0])

    points = []
    errors = [None] * len(values)
    for i, value in enumerate(values):
        try:
            points.append(cfg.updated(point_changes(cfg, param, value)))
        except TtbsimError as e:
            points.append(None)
            errors[i] = e.to_dict()

    reports = [None] * len(values)
    todo = [i for i, p in enumerate(points) if p is not None]
    with tqdm(total=len(values), disable=not progress, desc=param) as bar:
        bar.update(len(values) - len(todo))
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                futures = {i: pool.submit(_run_point, points[i], inputs)
                           for i in todo}
                for i in todo:
                    reports[i], errors[i] = futures[i].result()
                    bar.update()
        else:
            for i in todo:
                reports[i], errors[i] = _run_point(points[i], inputs)
                bar.update()

    for value, r, e in zip(values, reports, errors):
        if e is None:
            logger.info('%s=%s: %d cycles, %.1f pJ, EDP %.3e', param, value,
                        r.cycles, r.energy_pj, r.edp)
        else:
            logger.warning('%s=%s failed: %s', param, value, e['message'])
    return SweepResult(param, values, reports, errors)
