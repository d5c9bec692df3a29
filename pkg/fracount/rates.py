# -*- coding: utf-8 -*-
# File: rates.py

"""
Deterministic intensity functions :math:`\\lambda(t)` and their cumulatives
:math:`\\Lambda(t)=\\int_0^t \\lambda(u)du`.

Every rate accepts either a scalar time or a numpy array of times,
and returns the same shape.
"""

import inspect
import pprint
import numpy as np

from .errors import DomainError, OrderingError, UnboundedRateError, UnreachableError

__all__ = ['RateFunction', 'ConstantRate', 'PowerLawRate', 'PiecewiseConstantRate']


def _check_times(t, name='t'):
    t = np.asarray(t, dtype='float64')
    if np.any(~np.isfinite(t)) or np.any(t < 0):
        raise DomainError("{} must be finite and nonnegative, got {}".format(name, t))
    return t


def _as_output(arr, like):
    if np.ndim(like) == 0:
        return float(arr)
    return arr


def _default_repr(self):
    """
    Produce something like "PowerLawRate(c=1.0, p=2.0)".
    It assumes that the instance has attributes that match its constructor.
    """
    classname = type(self).__name__
    fields = inspect.getfullargspec(self.__init__).args[1:]
    argstr = ["{}={}".format(f, pprint.pformat(getattr(self, f))) for f in fields]
    return "{}({})".format(classname, ', '.join(argstr))


class RateFunction(object):
    """
    Base class of a deterministic intensity :math:`\\lambda(t) \\ge 0` with a
    closed-form cumulative :math:`\\Lambda(t)`, :math:`\\Lambda(0)=0`.

    Instances are immutable. Subclasses implement :meth:`_intensity`,
    :meth:`_cumulative`, :meth:`_inverse` and :meth:`_sup`.
    """

    type_name = None
    """ The ``"type"`` tag used in scenario configs. """

    def intensity_at(self, t):
        """
        Args:
            t (float or np.ndarray): time(s) >= 0.

        Returns:
            :math:`\\lambda(t)`. At a breakpoint of a piecewise rate, the right limit.
        """
        t_arr = _check_times(t)
        return _as_output(self._intensity(t_arr), t)

    def cumulative(self, t):
        """
        Args:
            t (float or np.ndarray): time(s) >= 0.

        Returns:
            :math:`\\Lambda(t)`, in closed form.
        """
        t_arr = _check_times(t)
        return _as_output(self._cumulative(t_arr), t)

    def cumulative_between(self, s, t):
        """
        Returns:
            :math:`\\Lambda(t) - \\Lambda(s)`, the Poisson parameter of the increment on ``[s, t]``.
        """
        s_arr, t_arr = _check_times(s, 's'), _check_times(t)
        if np.any(s_arr > t_arr):
            raise OrderingError("cumulative_between needs s <= t, got s={} t={}".format(s, t))
        ret = self._cumulative(t_arr) - self._cumulative(s_arr)
        return _as_output(ret, t if np.ndim(t) else s)

    def inverse_cumulative(self, y):
        """
        Args:
            y (float or np.ndarray): level(s) >= 0.

        Returns:
            :math:`\\inf\\{u: \\Lambda(u) \\ge y\\}`.

        Raises:
            UnreachableError: if ``y`` exceeds :math:`\\sup \\Lambda`.
        """
        y_arr = _check_times(y, 'y')
        return _as_output(self._inverse(y_arr), y)

    def upper_bound(self, s, t):
        """
        Returns:
            float: :math:`\\sup_{u\\in[s,t]} \\lambda(u)`, used as the dominating rate for thinning.

        Raises:
            UnboundedRateError: when the supremum is infinite.
        """
        s, t = float(_check_times(s, 's')), float(_check_times(t))
        if s > t:
            raise OrderingError("upper_bound needs s <= t, got s={} t={}".format(s, t))
        return float(self._sup(s, t))

    @property
    def is_zero(self):
        """ Whether :math:`\\lambda \\equiv 0`. """
        raise NotImplementedError()

    def to_config(self):
        raise NotImplementedError()

    @staticmethod
    def from_config(cfg):
        """
        Build a rate from its serialized form, e.g. ``{"type": "power", "c": 1.0, "p": 2.0}``.
        """
        if not isinstance(cfg, dict) or 'type' not in cfg:
            raise DomainError("A rate needs a 'type' field, got {}".format(cfg), param="type")
        kind = cfg["type"]
        try:
            if kind == ConstantRate.type_name:
                return ConstantRate(cfg["lambda"])
            if kind == PowerLawRate.type_name:
                return PowerLawRate(cfg["c"], cfg["p"])
            if kind == PiecewiseConstantRate.type_name:
                return PiecewiseConstantRate(cfg["breakpoints"], cfg["levels"])
        except DomainError:
            raise
        except KeyError as e:
            raise DomainError("Missing field {} for a {} rate".format(e, kind), param=e.args[0])
        except (TypeError, ValueError) as e:
            raise DomainError("Malformed {} rate: {}".format(kind, e))
        raise DomainError("Unknown rate type '{}'".format(kind), param="type")

    def __eq__(self, other):
        return type(self) is type(other) and self.to_config() == other.to_config()

    def __hash__(self):
        return hash(repr(self))

    def __repr__(self):
        return _default_repr(self)


class ConstantRate(RateFunction):
    """ :math:`\\lambda(t) = \\lambda`, :math:`\\Lambda(t) = \\lambda t`. """

    type_name = 'constant'

    def __init__(self, lam):
        lam = float(lam)
        if not np.isfinite(lam) or lam < 0:
            raise DomainError("lambda must be finite and >= 0, got {}".format(lam), param="lambda")
        self.lam = lam

    def __repr__(self):
        return "ConstantRate(lam={})".format(self.lam)

    @property
    def is_zero(self):
        return self.lam == 0

    def _intensity(self, t):
        return np.full_like(t, self.lam)

    def _cumulative(self, t):
        return self.lam * t

    def _inverse(self, y):
        if self.lam == 0:
            if np.any(y > 0):
                raise UnreachableError("A zero rate never reaches level {}".format(y))
            return np.zeros_like(y)
        return y / self.lam

    def _sup(self, s, t):
        return self.lam

    def to_config(self):
        return {'type': self.type_name, 'lambda': self.lam}


class PowerLawRate(RateFunction):
    """
    :math:`\\Lambda(t) = c t^p`, hence :math:`\\lambda(t) = c p t^{p-1}`.

    With ``p < 1`` the intensity is unbounded near 0: the rate still simulates
    exactly by inversion, but it cannot be thinned on an interval touching 0.
    """

    type_name = 'power'

    def __init__(self, c, p):
        c, p = float(c), float(p)
        if not np.isfinite(c) or c < 0:
            raise DomainError("c must be finite and >= 0, got {}".format(c), param="c")
        if not np.isfinite(p) or p <= 0:
            raise DomainError("p must be finite and > 0, got {}".format(p), param="p")
        self.c = c
        self.p = p

    @property
    def is_zero(self):
        return self.c == 0

    def _intensity(self, t):
        if self.c == 0:
            return np.zeros_like(t)
        with np.errstate(divide='ignore'):
            return self.c * self.p * np.power(t, self.p - 1)

    def _cumulative(self, t):
        return self.c * np.power(t, self.p)

    def _inverse(self, y):
        if self.c == 0:
            if np.any(y > 0):
                raise UnreachableError("A zero rate never reaches level {}".format(y))
            return np.zeros_like(y)
        return np.power(y / self.c, 1.0 / self.p)

    def _sup(self, s, t):
        if self.c == 0:
            return 0.
        if self.p >= 1:
            return self.c * self.p * t ** (self.p - 1)
        if s == 0:
            raise UnboundedRateError(
                "PowerLawRate(p={}) is unbounded near 0, it has no finite upper bound on [0, {}]".format(self.p, t))
        return self.c * self.p * s ** (self.p - 1)

    def to_config(self):
        return {'type': self.type_name, 'c': self.c, 'p': self.p}


class PiecewiseConstantRate(RateFunction):
    """
    ``levels[i]`` on ``[breakpoints[i-1], breakpoints[i])``, with an implicit
    first breakpoint at 0. There is one more level than breakpoints; the last
    level holds forever. The intensity is right-continuous.
    """

    type_name = 'piecewise'

    def __init__(self, breakpoints, levels):
        bp = np.asarray(breakpoints, dtype='float64').ravel()
        lv = np.asarray(levels, dtype='float64').ravel()
        if len(lv) != len(bp) + 1:
            raise DomainError("Need len(levels) == len(breakpoints) + 1, got {} and {}".format(len(lv), len(bp)),
                              param="levels")
        if np.any(~np.isfinite(bp)) or np.any(bp <= 0) or np.any(np.diff(bp) <= 0):
            raise DomainError("breakpoints must be positive and strictly increasing, got {}".format(bp),
                              param="breakpoints")
        if np.any(~np.isfinite(lv)) or np.any(lv < 0):
            raise DomainError("levels must be finite and >= 0, got {}".format(lv), param="levels")
        self.breakpoints = bp
        self.levels = lv
        self._knots = np.concatenate([[0.], bp])
        # cumulative value at each knot
        self._cum_knots = np.concatenate([[0.], np.cumsum(lv[:-1] * np.diff(self._knots))])

    def __repr__(self):
        return "PiecewiseConstantRate(breakpoints={}, levels={})".format(
            self.breakpoints.tolist(), self.levels.tolist())

    @property
    def is_zero(self):
        return not np.any(self.levels > 0)

    def _segment(self, t):
        return np.searchsorted(self._knots, t, side='right') - 1

    def _intensity(self, t):
        return self.levels[self._segment(t)]

    def _cumulative(self, t):
        i = self._segment(t)
        return self._cum_knots[i] + self.levels[i] * (t - self._knots[i])

    def _inverse(self, y):
        y = np.asarray(y, dtype='float64')
        flat = np.atleast_1d(y)
        # segment i with cum[i] < y <= cum[i+1]; the last segment is open-ended
        i = np.searchsorted(self._cum_knots, flat, side='left') - 1
        i = np.clip(i, 0, len(self.levels) - 1)
        lv = self.levels[i]
        positive = flat > 0
        if np.any(positive & (lv == 0)):
            raise UnreachableError("Level(s) {} exceed the supremum {} of the cumulative rate".format(
                flat[positive & (lv == 0)], self._cum_knots[-1]))
        with np.errstate(divide='ignore', invalid='ignore'):
            ret = np.where(positive, self._knots[i] + (flat - self._cum_knots[i]) / np.where(lv > 0, lv, 1.), 0.)
        return ret.reshape(y.shape)

    def _sup(self, s, t):
        i0, i1 = self._segment(s), self._segment(t)
        return float(self.levels[i0:i1 + 1].max())

    def to_config(self):
        return {'type': self.type_name,
                'breakpoints': self.breakpoints.tolist(),
                'levels': self.levels.tolist()}
