#!/usr/bin/env python
# -*- coding: utf-8 -*-
import logging
import time
from collections import OrderedDict

logger = logging.getLogger(__name__)

_SCALE = {'s': 1.0, 'ms': 1e3, 'us': 1e6, 'ns': 1e9}


class Timer:
    '''Wall-clock timings of named phases, reported through a logger.'''

    def __init__(self, logger=logger):
        self.logger = logger
        self.reset()

    def reset(self):
        self.t = OrderedDict()
        self.dt = OrderedDict()

    def tic(self, tag):
        self.t[tag] = time.perf_counter()

    def toc(self, tag):
        self.dt[tag] = time.perf_counter() - self.t[tag]
        del self.t[tag]
        return self.dt[tag]

    def report(self, unit='s'):
        try:
            scale = _SCALE[unit]
        except KeyError:
            raise ValueError('Unknown unit %s' % unit) from None
        for tag, dt in self.dt.items():
            self.logger.debug('%9.1f %s on %s', dt * scale, unit, tag)
