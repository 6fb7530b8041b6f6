#!/usr/bin/env python
# -*- coding: utf-8 -*-
from io import StringIO
from ttbsim.util.printer import markdown, print_layers, print_sweep
from ttbsim.harness import load_config, run, sweep


def tiny():
    return load_config({'model': {'T': 2, 'N': 8, 'D': 8},
                        'run': {'layers': ['q', 'attn']}})


def test_markdown_header_alignment():
    out = StringIO()
    markdown.table_header(('Hello', '%9d', 0), file=out)
    line1, line2 = out.getvalue().strip().split('\n')
    assert(line1 == '|    Hello|')
    assert(line2 == '|---------|')

    out = StringIO()
    markdown.table_header(('Hello', '%-9d', 0), file=out)
    line1, _ = out.getvalue().strip().split('\n')
    assert(line1 == '|Hello    |')


def test_markdown_title_wider_than_content():
    out = StringIO()
    markdown.table(('energy (pJ)', '%4d', 7), print_header=True, file=out)
    header, sep, row = out.getvalue().strip().split('\n')
    assert(len(header) == len(sep) == len(row))
    assert(row == '|          7|')


def test_markdown_row_print_header():
    fields = [('a', '%9d', 0), ('b', '%12f', 0), ('c', '%15g', 0)]
    out = StringIO()
    markdown.table_start()
    markdown.table(*fields, file=out)
    assert(len(out.getvalue().strip().split('\n')) == 3)
    out = StringIO()
    markdown.table(*fields, file=out)
    assert(len(out.getvalue().strip().split('\n')) == 1)
    cols = out.getvalue().strip().strip('|').split('|')
    assert([len(c) for c in cols] == [9, 12, 15])


def test_print_layers():
    report = run(tiny())
    out = StringIO()
    print_layers(report, file=out)
    lines = out.getvalue().strip().split('\n')
    # header, separator, two layers and the total
    assert(len(lines) == 5)
    assert('block0.q' in lines[2])
    assert('block0.attn' in lines[3])
    assert(lines[4].startswith('|total'))
    assert(str(report.cycles) in lines[4])


def test_print_sweep():
    result = sweep(tiny(), 'bundle_volume', [2, '1x70000'])
    out = StringIO()
    print_sweep(result, file=out)
    lines = out.getvalue().strip().split('\n')
    assert(len(lines) == 4)
    assert('failed' in lines[3])
