# -*- coding: utf-8 -*-
# File: errors.py

__all__ = ['FracountError', 'DomainError', 'OrderingError', 'UnboundedRateError',
           'UnreachableError', 'ConfigurationError', 'InsufficientPathError',
           'UnsupportedError', 'ProbeError', 'SizingError', 'DegenerateError']


class FracountError(Exception):
    """ Base class of every error raised by fracount. """
    pass


class DomainError(FracountError, ValueError):
    """
    A parameter lies outside the domain of the operation.

    Attributes:
        param (str or None): name of the offending parameter, if known.
    """

    def __init__(self, message, param=None):
        super(DomainError, self).__init__(message)
        self.param = param


class OrderingError(DomainError):
    """ Times or values that must be ordered are not, e.g. ``s > t``. """
    pass


class UnboundedRateError(DomainError):
    """ The intensity has no finite supremum on the requested interval. """
    pass


class UnreachableError(FracountError):
    """ The cumulative intensity never reaches the requested level. """
    pass


class ConfigurationError(FracountError):
    """
    A scenario or sampler configuration cannot be used.

    Attributes:
        field (str or None): dotted path of the offending config field.
    """

    def __init__(self, message, field=None):
        if field:
            message = "{}: {}".format(field, message)
        super(ConfigurationError, self).__init__(message)
        self.field = field


class InsufficientPathError(FracountError):
    """ A sampled driver path does not reach the level asked for; extend it. """
    pass


class UnsupportedError(FracountError):
    """ No oracle or check exists for this kind of object. """
    pass


class ProbeError(FracountError):
    """ A martingale probe produced a non-finite or degenerate statistic. """
    pass


class SizingError(FracountError):
    """ Too few samples for the requested statistic. """
    pass


class DegenerateError(FracountError):
    """ A contingency table or sample collapsed to a single cell. """
    pass
