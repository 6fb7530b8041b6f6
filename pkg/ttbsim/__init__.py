#!/usr/bin/env python
# -*- coding: utf-8 -*-
""" Cycle and energy simulator of a heterogeneous spiking-transformer
accelerator built around token-time bundles """
from .ttb import SpikeTensor, BundleShape, TTBGrid, pack_ttb

__all__ = ['SpikeTensor', 'BundleShape', 'TTBGrid', 'pack_ttb']

__version__ = '0.1.0'
