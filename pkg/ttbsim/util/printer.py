#!/usr/bin/env python
# -*- coding: utf-8 -*-
import sys


class markdown:
    '''Markdown tables printed row by row.'''

    _print_table_header = False

    @classmethod
    def table_start(cls):
        cls._print_table_header = True

    @classmethod
    def table_header(cls, *fields, file=None):
        '''Print the header row of a Markdown table.

        Parameters
        ----------
        fields: list of (title, format, value) tuples
            Each tuple sets the title, format, and a dummy value for each
            column.
        '''
        strs = [fmt % value for _, fmt, value in fields]
        align = ['-' if fmt.startswith('%-') else '' for _, fmt, _ in fields]
        # columns are as wide as the wider of title and content
        widths = [max(len(s), len(f[0])) for s, f in zip(strs, fields)]
        header = '|'.join([f'%{a}{w}s' % f[0]
                           for a, w, f in zip(align, widths, fields)])
        sep = '|'.join(['-' * w for w in widths])
        print(f'|{header}|\n|{sep}|', file=file or sys.stdout)
        return widths

    @classmethod
    def table(cls, *fields, print_header='auto', file=None):
        '''Print a row of data in Markdown table format.

        Parameters
        ----------
        fields: list of (title, format, value) tuples
            Each tuple sets the title of the associated column, format, and
            the value.
        print_header: Boolean or 'auto'
            If 'auto', a header row is printed on the first call since
            :py:meth:`table_start`.
        file: stream or None
            Destination, standard output by default.
        '''
        if print_header is True or (print_header == 'auto' and
                                    cls._print_table_header is True):
            cls.table_header(*fields, file=file)
            cls._print_table_header = False
        cells = []
        for title, fmt, value in fields:
            s = fmt % value
            w = max(len(s), len(title))
            cells.append(s.ljust(w) if fmt.startswith('%-') else s.rjust(w))
        print('|' + '|'.join(cells) + '|', file=file or sys.stdout)


def print_layers(report, file=None):
    '''Per-layer cycles and energy of a SimReport.'''
    markdown.table_start()
    for la in report.layers:
        split = ('-' if la.kind == 'attention'
                 else f'{la.n_dense}/{la.n_sparse}')
        markdown.table(
            ('layer', '%-12s', la.name),
            ('cycles', '%10d', la.cycles),
            ('energy (pJ)', '%12.1f', la.energy.total_pj),
            ('dense/sparse', '%12s', split),
            ('DRAM bytes', '%10d',
             la.dram['read_bytes'] + la.dram['write_bytes']),
            file=file,
        )
    markdown.table(
        ('layer', '%-12s', 'total'),
        ('cycles', '%10d', report.cycles),
        ('energy (pJ)', '%12.1f', report.energy_pj),
        ('dense/sparse', '%12s', ''),
        ('DRAM bytes', '%10d', report.dram_total('read_bytes') +
         report.dram_total('write_bytes')),
        file=file,
    )


def print_sweep(result, file=None):
    '''Summary of a SweepResult, one row per point.'''
    markdown.table_start()
    for value, r, e in zip(result.values, result.reports, result.errors):
        if r is None:
            row = [('cycles', '%10s', 'failed'), ('energy (pJ)', '%14s', ''),
                   ('EDP (J*s)', '%11s', '')]
        else:
            row = [('cycles', '%10d', r.cycles),
                   ('energy (pJ)', '%14.1f', r.energy_pj),
                   ('EDP (J*s)', '%11.3e', r.edp)]
        markdown.table((result.param, '%-13s', str(value)), *row, file=file)
