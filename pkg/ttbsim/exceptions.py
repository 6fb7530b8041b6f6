#!/usr/bin/env python
# -*- coding: utf-8 -*-
'''Exception types raised by the simulator.'''


class TtbsimError(Exception):
    '''Base class of all errors raised deliberately by ttbsim.'''

    def to_dict(self):
        '''Machine-readable form used by the command-line interface.'''
        return {'error': type(self).__name__, 'message': str(self)}


class ShapeError(TtbsimError, ValueError):
    pass


class ConfigurationError(TtbsimError, ValueError):
    pass


class CapacityError(TtbsimError, RuntimeError):
    '''A tensor row does not fit into its global-buffer partition.'''

    def __init__(self, message, tensor=None):
        super().__init__(message)
        self.tensor = tensor

    def to_dict(self):
        return dict(super().to_dict(), tensor=self.tensor)


class OracleMismatchError(TtbsimError, AssertionError):
    '''A simulated functional output disagrees with the reference model.

    Parameters
    ----------
    layer: str
        Name of the layer under check, e.g. ``'block0.q'``.
    tensor: str
        Name of the compared tensor.
    coordinate: tuple of int or None
        Index of the first differing element.
    expected, actual:
        Reference and simulated values at that index.
    '''

    def __init__(self, layer, tensor, coordinate=None, expected=None,
                 actual=None, message=None):
        self.layer = layer
        self.tensor = tensor
        self.coordinate = coordinate
        self.expected = expected
        self.actual = actual
        if message is None:
            message = (f'{layer}: {tensor} differs from the reference at '
                       f'{coordinate}: expected {expected}, got {actual}')
        super().__init__(message)

    def to_dict(self):
        return dict(
            super().to_dict(),
            layer=self.layer,
            tensor=self.tensor,
            coordinate=(None if self.coordinate is None
                        else [int(i) for i in self.coordinate]),
            expected=_plain(self.expected),
            actual=_plain(self.actual),
        )


def _plain(value):
    try:
        return value.item()
    except AttributeError:
        return value
