# -*- coding: utf-8 -*-
# File: subordinators.py

"""
Path-level simulation of stable, tempered stable and mixed stable subordinators,
their first-passage inverses, and the composition :math:`D_{\\beta,\\theta}(Y_\\alpha(t))`.
"""

import numpy as np

from .errors import DomainError, InsufficientPathError, OrderingError
from .sampling import one_sided_stable, tempered_stable_increment
from .utils.argtools import log_once

__all__ = ['MonotonePath', 'SubordinatorSpec', 'DEFAULT_GRID_STEP', 'time_grid',
           'stable_path', 'tempered_path', 'mixed_path', 'first_passage',
           'inverse_values', 'subordinate_at', 'clock_values']

DEFAULT_GRID_STEP = 1e-3

# largest dt * theta^beta of one tempered proposal; acceptance stays >= e^-1
_TEMPERED_SPLIT = 1.0

# a driver path is doubled at most this many times before giving up
_MAX_DOUBLINGS = 48


class MonotonePath(object):
    """
    A sampled nondecreasing function: ``values[i]`` at ``times[i]``.

    ``times`` is strictly increasing from 0, ``values`` is nondecreasing from 0.
    Between grid points the path holds its left value.
    """

    def __init__(self, times, values):
        times = np.asarray(times, dtype='float64')
        values = np.asarray(values, dtype='float64')
        if times.ndim != 1 or times.shape != values.shape or len(times) == 0:
            raise DomainError("times and values must be 1D arrays of equal, nonzero length")
        if times[0] != 0 or values[0] != 0:
            raise DomainError("A monotone path starts at (0, 0), got ({}, {})".format(times[0], values[0]))
        if np.any(np.diff(times) <= 0):
            raise OrderingError("times must be strictly increasing")
        if np.any(np.diff(values) < 0):
            raise OrderingError("values must be nondecreasing")
        self.times = times
        self.values = values

    @property
    def extent(self):
        """ The last grid time. """
        return float(self.times[-1])

    def __len__(self):
        return len(self.times)

    def value_at(self, t):
        """
        Args:
            t (float or np.ndarray): time(s) in ``[0, extent]``.

        Returns:
            the value at the last grid point not after ``t``.
        """
        t_arr = np.asarray(t, dtype='float64')
        if np.any(t_arr < 0) or np.any(t_arr > self.extent):
            raise DomainError("t must lie in [0, {}], got {}".format(self.extent, t))
        ret = self.values[np.searchsorted(self.times, t_arr, side='right') - 1]
        return float(ret) if ret.ndim == 0 else ret

    def __repr__(self):
        return "MonotonePath(n={}, extent={}, final={})".format(len(self), self.extent, self.values[-1])


class SubordinatorSpec(object):
    """
    A random clock: a subordinator, an inverse subordinator, their composition, or the identity.

    Kinds and parameters:

    * ``identity``: no parameters. :math:`Y_1(t) = t`.
    * ``stable``: ``alpha`` in (0, 1).
    * ``tempered``: ``beta`` in (0, 1), ``theta`` > 0.
    * ``mixed``: ``alpha1 < alpha2`` in (0, 1), weights ``c1, c2 >= 0`` with ``c1 + c2 = 1``.
    * ``inverse_stable``: ``alpha`` in (0, 1]. ``alpha=1`` is the identity.
    * ``inverse_mixed``: as ``mixed``.
    * ``tempered_of_inverse_stable``: ``beta``, ``theta`` as ``tempered`` and ``alpha`` as ``inverse_stable``.
    """

    PARAMS = {
        'identity': (),
        'stable': ('alpha',),
        'tempered': ('beta', 'theta'),
        'mixed': ('alpha1', 'alpha2', 'c1', 'c2'),
        'inverse_stable': ('alpha',),
        'inverse_mixed': ('alpha1', 'alpha2', 'c1', 'c2'),
        'tempered_of_inverse_stable': ('beta', 'theta', 'alpha'),
    }

    def __init__(self, kind, grid_step=DEFAULT_GRID_STEP, **params):
        if kind not in self.PARAMS:
            raise DomainError("Unknown subordinator kind '{}', choose from {}".format(
                kind, sorted(self.PARAMS.keys())), param='kind')
        expected = self.PARAMS[kind]
        for k in params:
            if k not in expected:
                raise DomainError("Subordinator kind '{}' takes no parameter '{}'".format(kind, k), param=k)
        for k in expected:
            if k not in params:
                raise DomainError("Subordinator kind '{}' needs parameter '{}'".format(kind, k), param=k)
        self.kind = kind
        self.grid_step = _check_positive(grid_step, 'grid_step')
        self.params = {k: float(params[k]) for k in expected}
        self._validate()

    def _validate(self):
        p = self.params
        if self.kind == 'stable':
            _check_open_index(p['alpha'], 'alpha')
        if self.kind in ('inverse_stable', 'tempered_of_inverse_stable'):
            if not 0 < p['alpha'] <= 1:
                raise DomainError("alpha must lie in (0, 1], got {}".format(p['alpha']), param='alpha')
        if 'beta' in p:
            _check_open_index(p['beta'], 'beta')
            _check_positive(p['theta'], 'theta')
        if 'alpha1' in p:
            _check_open_index(p['alpha1'], 'alpha1')
            _check_open_index(p['alpha2'], 'alpha2')
            if not p['alpha1'] < p['alpha2']:
                raise DomainError("Need alpha1 < alpha2, got {} and {}".format(p['alpha1'], p['alpha2']),
                                  param='alpha2')
            for k in ['c1', 'c2']:
                if not p[k] >= 0:
                    raise DomainError("{} must be >= 0, got {}".format(k, p[k]), param=k)
            if abs(p['c1'] + p['c2'] - 1) > 1e-9:
                raise DomainError("Need c1 + c2 = 1, got {} + {}".format(p['c1'], p['c2']), param='c2')

    def __getattr__(self, name):
        params = self.__dict__.get('params', {})
        if name in params:
            return params[name]
        raise AttributeError("SubordinatorSpec '{}' has no attribute '{}'".format(
            self.__dict__.get('kind'), name))

    @property
    def is_identity(self):
        """ Whether the clock is :math:`Y(t) = t` almost surely. """
        return self.kind == 'identity' or (self.kind == 'inverse_stable' and self.params['alpha'] == 1)

    @property
    def is_inverse(self):
        return self.kind in ('inverse_stable', 'inverse_mixed')

    @property
    def has_moments(self):
        """ False for the untempered stable and mixed clocks, whose values have no mean. """
        return self.kind not in ('stable', 'mixed')

    def driver(self):
        """
        Returns:
            SubordinatorSpec: the direct subordinator an inverse kind is the first passage of.
        """
        if self.kind == 'inverse_stable':
            return SubordinatorSpec('stable', self.grid_step, alpha=self.alpha)
        if self.kind == 'inverse_mixed':
            return SubordinatorSpec('mixed', self.grid_step, **self.params)
        raise DomainError("Subordinator kind '{}' is not an inverse".format(self.kind), param='kind')

    def inner(self):
        """
        Returns:
            SubordinatorSpec: the inverse stable clock inside ``tempered_of_inverse_stable``.
        """
        assert self.kind == 'tempered_of_inverse_stable', self.kind
        return SubordinatorSpec('inverse_stable', self.grid_step, alpha=self.alpha)

    def to_config(self):
        cfg = {'kind': self.kind}
        cfg.update(self.params)
        cfg['grid_step'] = self.grid_step
        return cfg

    @staticmethod
    def from_config(cfg):
        """
        Build a spec from e.g. ``{"kind": "inverse_stable", "alpha": 0.7, "grid_step": 0.001}``.
        """
        if not isinstance(cfg, dict) or 'kind' not in cfg:
            raise DomainError("A subordinator needs a 'kind' field, got {}".format(cfg), param='kind')
        cfg = dict(cfg)
        kind = cfg.pop('kind')
        grid_step = cfg.pop('grid_step', DEFAULT_GRID_STEP)
        try:
            return SubordinatorSpec(kind, grid_step, **cfg)
        except (TypeError, ValueError) as e:
            if isinstance(e, DomainError):
                raise
            raise DomainError("Malformed subordinator: {}".format(e))

    def __eq__(self, other):
        return isinstance(other, SubordinatorSpec) and self.to_config() == other.to_config()

    def __hash__(self):
        return hash(repr(self))

    def __repr__(self):
        args = ', '.join('{}={}'.format(k, v) for k, v in sorted(self.params.items()))
        return "SubordinatorSpec('{}', grid_step={}{})".format(self.kind, self.grid_step, ', ' + args if args else '')


def _check_positive(x, name):
    x = float(x)
    if not np.isfinite(x) or x <= 0:
        raise DomainError("{} must be finite and > 0, got {}".format(name, x), param=name)
    return x


def _check_open_index(x, name):
    if not 0 < x < 1:
        raise DomainError("{} must lie in (0, 1), got {}".format(name, x), param=name)


def _n_steps(horizon, step):
    horizon = _check_positive(horizon, 'horizon')
    step = _check_positive(step, 'step')
    if step > horizon:
        raise DomainError("step {} exceeds the horizon {}".format(step, horizon), param='step')
    return max(1, int(np.ceil(horizon / step - 1e-9)))


def time_grid(horizon, step):
    """
    Uniform grid ``0, step, 2*step, ...`` whose last point is exactly ``horizon``.
    The last cell is shorter when ``horizon`` is not a multiple of ``step``.
    """
    n = _n_steps(horizon, step)
    times = step * np.arange(n + 1, dtype='float64')
    times[-1] = horizon
    return times


def _check_query(query_times, name='query_times'):
    q = np.asarray(query_times, dtype='float64')
    if q.ndim != 1:
        raise DomainError("{} must be a 1D array".format(name), param=name)
    if np.any(~np.isfinite(q)) or np.any(q < 0):
        raise DomainError("{} must be finite and nonnegative".format(name), param=name)
    if np.any(np.diff(q) < 0):
        raise OrderingError("{} must be nondecreasing".format(name), param=name)
    return q


def _tempered_split(beta, theta, dt):
    m = max(1, int(np.ceil(dt * theta ** beta / _TEMPERED_SPLIT)))
    if m > 1:
        log_once("Tempered step {} is split into {} sub-steps (theta={}, beta={}).".format(dt, m, theta, beta))
    return m


class _PathBuilder(object):
    """
    Accumulates the increments of a direct subordinator on a fixed grid, in chunks.
    Chunk sizes fully determine which variates are drawn.
    """

    def __init__(self, spec, step, rng):
        self.step = step
        self._incs = []
        self._n = 0
        self.top = 0.
        if spec.kind == 'stable':
            self._draw = self._stable_draw(spec.alpha, step, rng)
        elif spec.kind == 'mixed':
            self._draw = self._mixed_draw(spec, step, rng)
        elif spec.kind == 'tempered':
            self._draw = self._tempered_draw(spec.beta, spec.theta, step, rng)
        else:
            raise DomainError("No direct path for subordinator kind '{}'".format(spec.kind), param='kind')

    @staticmethod
    def _stable_draw(alpha, dt, rng):
        scale = dt ** (1.0 / alpha)
        return lambda n: scale * one_sided_stable(alpha, rng, size=n)

    @staticmethod
    def _mixed_draw(spec, dt, rng):
        draws = []
        # component 1 owns the stream itself, so c2=0 reproduces the plain stable path
        if spec.c1 > 0:
            draws.append(_PathBuilder._stable_draw(spec.alpha1, spec.c1 * dt, rng))
        if spec.c2 > 0:
            draws.append(_PathBuilder._stable_draw(spec.alpha2, spec.c2 * dt, rng.child(1)))

        def draw(n):
            ret = draws[0](n)
            for d in draws[1:]:
                ret = ret + d(n)
            return ret
        return draw

    @staticmethod
    def _tempered_draw(beta, theta, dt, rng):
        m = _tempered_split(beta, theta, dt)
        if m == 1:
            return lambda n: tempered_stable_increment(beta, theta, dt, rng, size=n)
        return lambda n: tempered_stable_increment(beta, theta, dt / m, rng, size=(n, m)).sum(axis=1)

    def grow(self, n):
        inc = self._draw(n)
        self._incs.append(inc)
        self._n += n
        self.top += float(inc.sum())

    def __len__(self):
        return self._n

    def path(self):
        values = np.concatenate([[0.], np.cumsum(np.concatenate(self._incs))])
        times = self.step * np.arange(self._n + 1, dtype='float64')
        return MonotonePath(times, values)


def stable_path(alpha, horizon, step, rng):
    """
    Sample :math:`D_\\alpha` on the grid ``0, step, 2*step, ...`` up to at least ``horizon``.
    Increments are i.i.d. ``step^(1/alpha) * S`` with S from :func:`one_sided_stable`.

    Returns:
        MonotonePath
    """
    _check_open_index(float(alpha), 'alpha')
    n = _n_steps(horizon, step)
    builder = _PathBuilder(SubordinatorSpec('stable', step, alpha=alpha), step, rng)
    builder.grow(n)
    return builder.path()


def tempered_path(beta, theta, horizon, step, rng):
    """
    Sample :math:`D_{\\beta,\\theta}` on a uniform grid. Steps with
    ``step * theta^beta > 1`` are split into equal sub-steps.

    Returns:
        MonotonePath
    """
    spec = SubordinatorSpec('tempered', step, beta=beta, theta=theta)
    n = _n_steps(horizon, step)
    builder = _PathBuilder(spec, step, rng)
    builder.grow(n)
    return builder.path()


def mixed_path(alpha1, alpha2, c1, c2, horizon, step, rng):
    """
    Sample :math:`L(t) = D_{\\alpha_1}(c_1 t) + D_{\\alpha_2}(c_2 t)` on a uniform grid,
    with independent components. The first component draws from ``rng``, the
    second from ``rng.child(1)``; with ``c2=0`` the result equals
    ``stable_path(alpha1, horizon, step, rng)`` bit for bit.

    Returns:
        MonotonePath
    """
    spec = SubordinatorSpec('mixed', step, alpha1=alpha1, alpha2=alpha2, c1=c1, c2=c2)
    n = _n_steps(horizon, step)
    builder = _PathBuilder(spec, step, rng)
    builder.grow(n)
    return builder.path()


def first_passage(path, t):
    """
    Left-endpoint first passage: the grid time just before the path first exceeds ``t``.

    Args:
        path (MonotonePath):
        t (float or np.ndarray): level(s) >= 0.

    Returns:
        ``times[i-1]`` where ``i`` is the first index with ``values[i] > t``.

    Raises:
        InsufficientPathError: if the path never exceeds ``t``.
    """
    t_arr = np.asarray(t, dtype='float64')
    if np.any(t_arr < 0) or np.any(~np.isfinite(t_arr)):
        raise DomainError("first_passage needs finite levels >= 0, got {}".format(t), param='t')
    i = np.searchsorted(path.values, t_arr, side='right')
    if np.any(i >= len(path)):
        raise InsufficientPathError(
            "Path ends at value {} before exceeding level {}".format(path.values[-1], np.max(t_arr)))
    ret = path.times[i - 1]
    return float(ret) if ret.ndim == 0 else ret


def inverse_values(spec, query_times, rng):
    """
    Sample one trajectory of an inverse subordinator at the query times.

    The driver path is grown geometrically until it exceeds ``max(query_times)``,
    then :func:`first_passage` is applied per query.

    Args:
        spec (SubordinatorSpec): an ``inverse_stable``, ``inverse_mixed`` or identity spec.
        query_times (np.ndarray): nondecreasing times >= 0.
        rng (RngStream):

    Returns:
        np.ndarray: nondecreasing values, equal to ``query_times`` for the identity.
    """
    q = _check_query(query_times)
    if spec.is_identity:
        return q.copy()
    if not spec.is_inverse:
        raise DomainError("inverse_values needs an inverse kind, got '{}'".format(spec.kind), param='kind')
    if len(q) == 0:
        return q.copy()
    level = float(q[-1])
    step = spec.grid_step
    builder = _PathBuilder(spec.driver(), step, rng)
    index = spec.alpha if spec.kind == 'inverse_stable' else spec.alpha2
    # roughly twice the typical first-passage time of the top level
    builder.grow(max(16, int(np.ceil(2 * max(level, step) ** index / step))))
    doublings = 0
    while builder.top <= level:
        if doublings == _MAX_DOUBLINGS:
            raise InsufficientPathError(
                "Driver of {} did not exceed level {} after {} grid steps".format(spec, level, len(builder)))
        builder.grow(len(builder))
        doublings += 1
    return first_passage(builder.path(), q)


def subordinate_at(beta, theta, inner_values, rng):
    """
    Sample :math:`D_{\\beta,\\theta}` exactly at the given operational times,
    drawing independent tempered increments over consecutive gaps (the first gap starts at 0).
    Zero gaps give zero increments; long gaps are split into sub-steps.

    Args:
        beta, theta: tempered stable parameters.
        inner_values (np.ndarray): nondecreasing operational times, e.g. output of :func:`inverse_values`.
        rng (RngStream):

    Returns:
        np.ndarray: nondecreasing values of the same length.
    """
    spec = SubordinatorSpec('tempered', beta=beta, theta=theta)
    x = _check_query(inner_values, 'inner_values')
    gaps = np.diff(x, prepend=0.)
    inc = np.zeros_like(gaps)
    pos = np.flatnonzero(gaps > 0)
    if len(pos):
        g = gaps[pos]
        m = np.maximum(1, np.ceil(g * spec.theta ** spec.beta / _TEMPERED_SPLIT)).astype('int64')
        draws = tempered_stable_increment(spec.beta, spec.theta, np.repeat(g / m, m), rng)
        offsets = np.concatenate([[0], np.cumsum(m)[:-1]])
        inc[pos] = np.add.reduceat(draws, offsets)
    return np.cumsum(inc)


def _direct_values(spec, q, rng):
    # exact samples at arbitrary times from stationary independent increments
    gaps = np.diff(q, prepend=0.)
    if spec.kind == 'stable':
        inc = gaps ** (1.0 / spec.alpha) * one_sided_stable(spec.alpha, rng, size=len(q))
    else:
        inc = np.zeros_like(gaps)
        if spec.c1 > 0:
            inc = inc + (spec.c1 * gaps) ** (1.0 / spec.alpha1) * one_sided_stable(spec.alpha1, rng, size=len(q))
        if spec.c2 > 0:
            inc = inc + (spec.c2 * gaps) ** (1.0 / spec.alpha2) * one_sided_stable(
                spec.alpha2, rng.child(1), size=len(q))
    return np.cumsum(inc)


def clock_values(spec, query_times, rng):
    """
    Sample one trajectory of any clock at the query times.

    ``tempered_of_inverse_stable`` samples :math:`Y_\\alpha` on ``rng.child(0)`` and
    :math:`D_{\\beta,\\theta}` over its values on ``rng.child(1)``.

    Args:
        spec (SubordinatorSpec):
        query_times (np.ndarray): nondecreasing times >= 0.
        rng (RngStream):

    Returns:
        np.ndarray: nondecreasing clock values.
    """
    q = _check_query(query_times)
    if spec.is_identity:
        return q.copy()
    if spec.is_inverse:
        return inverse_values(spec, q, rng)
    if spec.kind in ('stable', 'mixed'):
        return _direct_values(spec, q, rng)
    if spec.kind == 'tempered':
        return subordinate_at(spec.beta, spec.theta, q, rng)
    assert spec.kind == 'tempered_of_inverse_stable', spec.kind
    y = inverse_values(spec.inner(), q, rng.child(0))
    return subordinate_at(spec.beta, spec.theta, y, rng.child(1))
