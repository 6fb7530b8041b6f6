#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Command-line interface.

Every failure is reported on stderr as a single JSON object with at least
``error`` (the exception class) and ``message`` keys, and exits with
status 1.'''
import argparse
import json
import logging
import re
import sys
from ttbsim import __version__
from ttbsim.exceptions import ConfigurationError, TtbsimError
from ttbsim.ttb import BundleShape, read_ttbs, write_ttbs
from ttbsim.reference import flops_breakdown
from ttbsim.util import Timer
from ttbsim.util.printer import print_layers, print_sweep
from .config import load_config
from .run import run
from .sweep import sweep
from .synth import synth_workload


def _dims(text):
    m = re.fullmatch(r'\s*(\d+)\s*x\s*(\d+)\s*x\s*(\d+)\s*', text.lower())
    if m is None:
        raise ConfigurationError(f'Cannot parse tensor shape {text!r}.')
    return tuple(int(g) for g in m.groups())


def _values(text):
    values = []
    for v in text.split(','):
        v = v.strip()
        if not v:
            continue
        values.append(v if 'x' in v.lower() else int(v))
    return values


def cmd_run(args):
    cfg = load_config(args.config)
    inputs = read_ttbs(args.input) if args.input else None
    timer = Timer()
    timer.tic('run')
    report = run(cfg, inputs)
    timer.toc('run')
    timer.report()
    report.save(args.out)
    print_layers(report)


def cmd_sweep(args):
    cfg = load_config(args.config)
    result = sweep(cfg, args.param, _values(args.values), jobs=args.jobs,
                   progress=args.progress)
    with open(args.out, 'w') as f:
        json.dump({
            'param': result.param,
            'values': result.values,
            'reports': [None if r is None else r.to_dict()
                        for r in result.reports],
            'errors': result.errors,
        }, f, sort_keys=True, indent=1)
    if args.csv:
        result.table().to_csv(args.csv, index=False)
    print_sweep(result)


def cmd_synth(args):
    T, N, D = _dims(args.shape)
    x = synth_workload(T, N, D, args.rate, args.cluster,
                       BundleShape.parse(args.bundle), args.seed)
    write_ttbs(args.out, x)


def cmd_flops(args):
    cfg = load_config(args.config)
    json.dump(flops_breakdown(cfg.model).to_dict(), sys.stdout, indent=1)
    print()


def build_parser():
    parser = argparse.ArgumentParser(
        prog='ttbsim',
        description='Cycle and energy simulator of a heterogeneous '
                    'spiking-transformer accelerator.'
    )
    parser.add_argument('--version', action='version',
                        version=f'%(prog)s {__version__}')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='-v for progress, -vv for per-layer details')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('run', help='simulate one input sample')
    p.add_argument('--config', required=True)
    p.add_argument('--out', required=True, help='JSON report')
    p.add_argument('--input', help='TTBS spike file')
    p.set_defaults(func=cmd_run)

    p = sub.add_parser('sweep', help='sweep an architectural parameter')
    p.add_argument('--config', required=True)
    p.add_argument('--param', required=True,
                   choices=['theta_s', 'bundle_volume', 'theta_p'])
    p.add_argument('--values', required=True,
                   help='comma-separated, e.g. 2,4,8 or 2x2,2x4')
    p.add_argument('--out', required=True)
    p.add_argument('--csv', help='also write the summary table')
    p.add_argument('--jobs', type=int, default=1)
    p.add_argument('--progress', action='store_true')
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser('synth', help='write a synthetic spike tensor')
    p.add_argument('--rate', type=float, required=True)
    p.add_argument('--cluster', type=float, default=0.0)
    p.add_argument('--shape', required=True, help='TxNxD')
    p.add_argument('--bundle', default='2x4', help='BTxBN')
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--out', required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser('flops', help='print the operation breakdown')
    p.add_argument('--config', required=True)
    p.set_defaults(func=cmd_flops)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.verbose:
        logging.basicConfig(
            level=logging.DEBUG if args.verbose > 1 else logging.INFO,
            format='%(levelname)s %(name)s: %(message)s'
        )
    try:
        args.func(args)
    except TtbsimError as e:
        error = e.to_dict()
    except (OSError, ValueError, ArithmeticError) as e:
        error = {'error': type(e).__name__, 'message': str(e)}
    else:
        return 0
    print(json.dumps(error, sort_keys=True), file=sys.stderr)
    return 1


if __name__ == '__main__':
    sys.exit(main())
