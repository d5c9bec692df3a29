# -*- coding: utf-8 -*-
# File: processes.py

"""
Simulation of counting processes: the non-homogeneous Poisson process (NPP),
the generalized counting process (NGCP), their time-changed (fractional)
variants, and Skellam differences of all of them.

Stream layout of one trajectory ``rng``:

* ``rng.child(0)``: the base process. NGCP component ``j`` (1-based) uses its
  child ``j-1``; Skellam uses child 0 for the plus and child 1 for the minus side.
* ``rng.child(1)``: the clock. Unshared Skellam clocks use its children 0 and 1.
"""

import numpy as np

from .errors import DomainError
from .rates import RateFunction, ConstantRate, PowerLawRate
from .sampling import exponential, poisson
from .subordinators import MonotonePath, SubordinatorSpec, clock_values, time_grid

__all__ = ['CountingPath', 'ProcessSpec', 'Compensator',
           'simulate_npp', 'simulate_ngcp', 'simulate_ngcp_marked', 'time_change',
           'simulate_skellam', 'simulate', 'evaluate', 'values_at']


class CountingPath(object):
    """
    A realization of a counting process: jumps of integer size at nondecreasing times.

    Attributes:
        jump_times (np.ndarray): float64, nondecreasing, in ``(0, horizon]``.
        jump_sizes (np.ndarray): int64, nonzero. Negative sizes come from the minus side of a Skellam process.
        horizon (float):
        clock (MonotonePath or None): the sampled time change on its grid, None for the identity.
        minus_clock (MonotonePath or None): the clock of the minus side, when Skellam clocks are not shared.
    """

    def __init__(self, jump_times, jump_sizes, horizon, clock=None, minus_clock=None):
        self.jump_times = np.asarray(jump_times, dtype='float64').ravel()
        self.jump_sizes = np.asarray(jump_sizes, dtype='int64').ravel()
        self.horizon = float(horizon)
        if len(self.jump_times) != len(self.jump_sizes):
            raise DomainError("Got {} jump times but {} jump sizes".format(
                len(self.jump_times), len(self.jump_sizes)))
        if len(self.jump_times):
            if self.jump_times[0] <= 0 or self.jump_times[-1] > self.horizon:
                raise DomainError("Jump times must lie in (0, {}]".format(self.horizon))
            if np.any(np.diff(self.jump_times) < 0):
                raise DomainError("Jump times must be nondecreasing")
            if np.any(self.jump_sizes == 0):
                raise DomainError("Jump sizes must be nonzero")
        self.clock = clock
        self.minus_clock = minus_clock
        self._cum = np.concatenate([[0], np.cumsum(self.jump_sizes)])

    @staticmethod
    def empty(horizon, clock=None, minus_clock=None):
        return CountingPath(np.zeros(0), np.zeros(0, dtype='int64'), horizon, clock, minus_clock)

    def __len__(self):
        return len(self.jump_times)

    def _check_t(self, t):
        t_arr = np.asarray(t, dtype='float64')
        if np.any(t_arr < 0) or np.any(t_arr > self.horizon):
            raise DomainError("t must lie in [0, {}], got {}".format(self.horizon, t), param='t')
        return t_arr

    def value(self, t):
        """ The right-continuous value at time(s) t. """
        t_arr = self._check_t(t)
        ret = self._cum[np.searchsorted(self.jump_times, t_arr, side='right')]
        return int(ret) if ret.ndim == 0 else ret

    def clock_at(self, t, minus=False):
        """
        The operational time reached at time(s) t: the clock value at the last
        grid point not after t, or t itself without a clock.
        """
        t_arr = self._check_t(t)
        clock = self.minus_clock if minus and self.minus_clock is not None else self.clock
        if clock is None:
            return float(t_arr) if t_arr.ndim == 0 else t_arr.copy()
        return clock.value_at(t_arr)

    def same_jumps(self, other):
        """ Whether two paths have bit-identical jumps and horizon. """
        return (self.horizon == other.horizon
                and np.array_equal(self.jump_times, other.jump_times)
                and np.array_equal(self.jump_sizes, other.jump_sizes))

    def __repr__(self):
        return "CountingPath(n_jumps={}, horizon={}, final={})".format(len(self), self.horizon, self._cum[-1])


def evaluate(path, t):
    """
    Args:
        path (CountingPath):
        t (float): time in ``[0, horizon]``.

    Returns:
        int: the sum of the sizes of all jumps at or before t.
    """
    return path.value(t)


def values_at(paths, times):
    """
    Evaluate many paths at many times.

    Returns:
        np.ndarray: int64 array of shape ``(len(paths), len(times))``.
    """
    times = np.asarray(times, dtype='float64')
    ret = np.empty((len(paths), len(times)), dtype='int64')
    for i, p in enumerate(paths):
        ret[i] = p.value(times)
    return ret


class ProcessSpec(object):
    """
    What to simulate.

    Kinds:

    * ``npp``: one :class:`RateFunction` ``rate``.
    * ``ngcp``: a list of ``k`` rates, rate ``j`` (1-based) driving jumps of size ``j``.
      ``construction`` picks ``"weighted"`` (sum of independent NPPs) or ``"marked"`` (thinning with marks).
      ``"marked"`` thins against the rates' upper bounds, so it needs rates bounded on ``[0, horizon]``
      (no ``PowerLawRate`` with ``p < 1``).
    * ``skellam``: ``plus`` minus ``minus``, both npp or ngcp specs without their own time change.
      ``shared_clock`` applies one clock trajectory to the difference; otherwise each side gets its own.

    Any kind takes an optional ``time_change`` :class:`SubordinatorSpec`.
    """

    KINDS = ('npp', 'ngcp', 'skellam')

    # ngcp with k=1 reports the npp names
    _FAMILY = {
        ('npp', None): 'NPP', ('ngcp', None): 'NGCP', ('skellam', None): 'NGSP',
        ('npp', 'inverse_stable'): 'NTFPP', ('ngcp', 'inverse_stable'): 'NGFCP',
        ('skellam', 'inverse_stable'): 'NGFSP',
        ('npp', 'stable'): 'NSFPP',
        ('npp', 'tempered'): 'NTSFPP', ('ngcp', 'tempered'): 'NTGSFCP', ('skellam', 'tempered'): 'NTGSFSP',
        ('npp', 'tempered_of_inverse_stable'): 'NTSTFPP', ('ngcp', 'tempered_of_inverse_stable'): 'NTGSTFCP',
        ('skellam', 'tempered_of_inverse_stable'): 'NTGSTFSP',
        ('npp', 'inverse_mixed'): 'NMFPP', ('ngcp', 'inverse_mixed'): 'NMFCP',
        ('skellam', 'inverse_mixed'): 'NMFSP',
    }

    def __init__(self, kind, rate=None, rates=None, plus=None, minus=None,
                 time_change=None, shared_clock=True, construction='weighted'):
        if kind not in self.KINDS:
            raise DomainError("Unknown process kind '{}', choose from {}".format(kind, list(self.KINDS)),
                              param='kind')
        self.kind = kind
        self.time_change = time_change
        self.shared_clock = bool(shared_clock)
        self.construction = construction
        if time_change is not None and not isinstance(time_change, SubordinatorSpec):
            raise DomainError("time_change must be a SubordinatorSpec", param='time_change')
        if kind == 'npp':
            if not isinstance(rate, RateFunction):
                raise DomainError("An npp needs a 'rate'", param='rate')
            self.rates = [rate]
        elif kind == 'ngcp':
            rates = list(rates or [])
            if not rates or not all(isinstance(r, RateFunction) for r in rates):
                raise DomainError("An ngcp needs a nonempty list of 'rates'", param='rates')
            self.rates = rates
        else:
            for name, comp in [('plus', plus), ('minus', minus)]:
                if not isinstance(comp, ProcessSpec) or comp.kind == 'skellam':
                    raise DomainError("Skellam '{}' must be an npp or ngcp spec".format(name), param=name)
                if comp.time_change is not None:
                    raise DomainError("Skellam '{}' cannot carry its own time change; "
                                      "set it on the skellam spec".format(name), param=name)
                if comp.construction != 'weighted':
                    raise DomainError("Skellam '{}' must use the weighted construction".format(name), param=name)
            self.plus = plus
            self.minus = minus
            self.rates = None
        if construction not in ('weighted', 'marked'):
            raise DomainError("construction must be 'weighted' or 'marked', got '{}'".format(construction),
                              param='construction')
        if construction == 'marked' and (kind != 'ngcp' or self.is_time_changed):
            raise DomainError("The marked construction applies to an ngcp without time change",
                              param='construction')

    @property
    def is_time_changed(self):
        return self.time_change is not None and not self.time_change.is_identity

    @property
    def is_skellam(self):
        return self.kind == 'skellam'

    @property
    def plus_rates(self):
        return self.plus.rates if self.is_skellam else self.rates

    @property
    def minus_rates(self):
        return self.minus.rates if self.is_skellam else []

    def base(self):
        """ The same process without its time change. """
        cfg = self.to_config()
        cfg.pop('time_change', None)
        return ProcessSpec.from_config(cfg)

    @property
    def family(self):
        """ Conventional acronym of the process, e.g. ``"NTFPP"``. """
        clock = self.time_change.kind if self.is_time_changed else None
        kind = self.kind
        if kind == 'ngcp' and len(self.rates) == 1:
            kind = 'npp'
        if kind == 'skellam' and clock == 'inverse_stable' and len(self.plus_rates) == len(self.minus_rates) == 1:
            return 'NFSP'
        return self._FAMILY.get((kind, clock), "{}({})".format(kind.upper(), clock))

    def to_config(self):
        cfg = {'kind': self.kind}
        if self.kind == 'npp':
            cfg['rate'] = self.rates[0].to_config()
        elif self.kind == 'ngcp':
            cfg['rates'] = [r.to_config() for r in self.rates]
            if self.construction != 'weighted':
                cfg['construction'] = self.construction
        else:
            cfg['plus'] = self.plus.to_config()
            cfg['minus'] = self.minus.to_config()
            cfg['shared_clock'] = self.shared_clock
        if self.time_change is not None:
            cfg['time_change'] = self.time_change.to_config()
        return cfg

    @staticmethod
    def from_config(cfg):
        """
        Build a spec from e.g.
        ``{"kind": "ngcp", "rates": [...], "time_change": {"kind": "inverse_stable", "alpha": 0.7}}``.

        Raises:
            DomainError: whose ``param`` is the dotted path of the offending field, relative to ``cfg``.
        """
        if not isinstance(cfg, dict) or 'kind' not in cfg:
            raise DomainError("A process needs a 'kind' field, got {}".format(cfg), param='kind')
        known = {'kind', 'rate', 'rates', 'plus', 'minus', 'time_change', 'shared_clock', 'construction'}
        for k in cfg:
            if k not in known:
                raise DomainError("Unknown process field '{}'".format(k), param=k)
        kwargs = {'kind': cfg['kind'],
                  'shared_clock': cfg.get('shared_clock', True),
                  'construction': cfg.get('construction', 'weighted')}
        if 'time_change' in cfg:
            kwargs['time_change'] = _nested(SubordinatorSpec.from_config, cfg['time_change'], 'time_change')
        if 'rate' in cfg:
            kwargs['rate'] = _nested(RateFunction.from_config, cfg['rate'], 'rate')
        if 'rates' in cfg:
            if not isinstance(cfg['rates'], list):
                raise DomainError("'rates' must be a list", param='rates')
            kwargs['rates'] = [_nested(RateFunction.from_config, r, 'rates[{}]'.format(i))
                               for i, r in enumerate(cfg['rates'])]
        for side in ['plus', 'minus']:
            if side in cfg:
                kwargs[side] = _nested(ProcessSpec.from_config, cfg[side], side)
        return ProcessSpec(**kwargs)

    def __eq__(self, other):
        return isinstance(other, ProcessSpec) and self.to_config() == other.to_config()

    def __hash__(self):
        return hash(repr(self))

    def __repr__(self):
        return "ProcessSpec({})".format(self.to_config())


def _nested(parse, cfg, prefix):
    try:
        return parse(cfg)
    except DomainError as e:
        path = prefix + '.' + e.param if e.param else prefix
        raise DomainError(str(e), param=path)


def _merge(parts, horizon, clock=None, minus_clock=None):
    """
    Merge (times, sizes) parts into one path. Equal times keep the order of ``parts``.
    """
    parts = [p for p in parts if len(p[0])]
    if not parts:
        return CountingPath.empty(horizon, clock, minus_clock)
    times = np.concatenate([p[0] for p in parts])
    sizes = np.concatenate([p[1] for p in parts])
    order = np.argsort(times, kind='stable')
    return CountingPath(times[order], sizes[order], horizon, clock, minus_clock)


def _candidates(bound, horizon, rng):
    """
    Arrival times of a homogeneous Poisson process with rate ``bound`` on ``(0, horizon]``,
    from exponential inter-arrival times drawn in chunks.
    """
    chunks = []
    last = 0.
    chunk = max(16, int(np.ceil(1.25 * bound * horizon)))
    while last <= horizon:
        arr = last + np.cumsum(exponential(bound, rng, size=chunk))
        chunks.append(arr)
        last = arr[-1]
    times = np.concatenate(chunks)
    return times[:np.searchsorted(times, horizon, side='right')]


def _npp_times(rate, horizon, rng):
    if rate.is_zero:
        return np.zeros(0)
    if isinstance(rate, (ConstantRate, PowerLawRate)):
        # unit-rate arrivals in operational time, mapped back through the inverse cumulative
        total = rate.cumulative(horizon)
        n = poisson(total, rng)
        u = np.sort(total - rng.uniform(0, total, size=n))
        return np.minimum(rate.inverse_cumulative(u), horizon)
    # Lewis-Shedler thinning
    bound = rate.upper_bound(0, horizon)
    if bound == 0:
        return np.zeros(0)
    cand = _candidates(bound, horizon, rng)
    keep = rng.uniform(0, bound, size=len(cand)) < rate.intensity_at(cand)
    return cand[keep]


def simulate_npp(rate, horizon, rng):
    """
    Simulate an NPP with intensity ``rate`` on ``[0, horizon]``.

    Constant and power-law rates map ``Poisson(Lambda(horizon))`` uniform arrivals through
    :meth:`RateFunction.inverse_cumulative`. Piecewise-constant rates use thinning
    against :meth:`RateFunction.upper_bound`.

    Returns:
        CountingPath: with all jump sizes 1.
    """
    horizon = _check_horizon(horizon)
    times = _npp_times(rate, horizon, rng)
    return CountingPath(times, np.ones(len(times), dtype='int64'), horizon)


def _check_horizon(horizon):
    horizon = float(horizon)
    if not np.isfinite(horizon) or horizon <= 0:
        raise DomainError("horizon must be finite and > 0, got {}".format(horizon), param='horizon')
    return horizon


def _check_rates(rates):
    rates = list(rates)
    if not rates:
        raise DomainError("Need at least one rate", param='rates')
    return rates


def simulate_ngcp(rates, horizon, rng):
    """
    Simulate an NGCP as the weighted sum of independent NPPs: a jump of
    component ``j`` (1-based, on ``rng.child(j-1)``) has size ``j``.
    Simultaneous jumps are ordered by ascending ``j``.

    With one rate the result is identical to ``simulate_npp(rate, horizon, rng.child(0))``.

    Returns:
        CountingPath
    """
    horizon = _check_horizon(horizon)
    return _merge(_weighted_parts(_check_rates(rates), horizon, rng), horizon)


def _weighted_parts(rates, horizon, rng, sign=1):
    parts = []
    for j, r in enumerate(rates, 1):
        t = _npp_times(r, horizon, rng.child(j - 1))
        parts.append((t, np.full(len(t), sign * j, dtype='int64')))
    return parts


def simulate_ngcp_marked(rates, horizon, rng):
    """
    Simulate an NGCP directly: thin a homogeneous process with rate
    :math:`B = \\sum_j B_j` (``B_j`` the upper bound of rate j), keeping a candidate
    at t with probability :math:`\\sum_j \\lambda_j(t) / B` and marking it ``j``
    with probability :math:`\\lambda_j(t) / \\sum_i \\lambda_i(t)`.

    Raises:
        UnboundedRateError: if some rate has no finite upper bound on ``[0, horizon]``.
    """
    horizon = _check_horizon(horizon)
    rates = _check_rates(rates)
    bound = sum(r.upper_bound(0, horizon) for r in rates)
    if bound == 0:
        return CountingPath.empty(horizon)
    cand = _candidates(bound, horizon, rng)
    v = rng.uniform(0, bound, size=len(cand))
    cum = np.cumsum([r.intensity_at(cand) for r in rates], axis=0)
    keep = cum[-1] > v
    marks = np.argmax(cum > v, axis=0) + 1
    return CountingPath(cand[keep], marks[keep], horizon)


def _base_parts(spec, horizon, rng, sign=1):
    if spec.kind == 'ngcp' and spec.construction == 'marked':
        p = simulate_ngcp_marked(spec.rates, horizon, rng)
        return [(p.jump_times, sign * p.jump_sizes)]
    if spec.kind == 'npp':
        t = _npp_times(spec.rates[0], horizon, rng)
        return [(t, np.full(len(t), sign, dtype='int64'))]
    return _weighted_parts(spec.rates, horizon, rng, sign)


def _cell_parts(rates, grid, clock, rng, sign=1, single=False):
    # base arrivals falling in one clock cell are reported at the cell's end time, one jump each
    parts = []
    for j, r in enumerate(rates, 1):
        stream = rng if single else rng.child(j - 1)
        counts = poisson(np.diff(r.cumulative(clock)), stream)
        cells = np.flatnonzero(counts)
        times = np.repeat(grid[cells + 1], counts[cells])
        parts.append((times, np.full(len(times), sign * j, dtype='int64')))
    return parts


def _clock_path(spec, horizon, rng):
    grid = time_grid(horizon, spec.grid_step)
    return grid, MonotonePath(grid, clock_values(spec, grid, rng))


def time_change(spec, horizon, rng):
    """
    Simulate ``spec`` evaluated along its random clock.

    The clock is sampled on the grid ``0, grid_step, ..., horizon`` from ``rng.child(1)``.
    Over each grid cell the base process receives an independent Poisson
    increment of its cumulative rate between the clock values at the cell ends,
    placed at the cell's end time as that many jumps of the base size j. An identity clock returns the
    untransformed base process, drawn from the same streams.

    Returns:
        CountingPath: with ``clock`` set.
    """
    horizon = _check_horizon(horizon)
    if spec.is_skellam:
        return simulate_skellam(spec, horizon, rng)
    if not spec.is_time_changed:
        return _merge(_base_parts(spec, horizon, rng.child(0)), horizon)
    grid, clock = _clock_path(spec.time_change, horizon, rng.child(1))
    parts = _cell_parts(spec.rates, grid, clock.values, rng.child(0), single=spec.kind == 'npp')
    return _merge(parts, horizon, clock)


def simulate_skellam(spec, horizon, rng):
    """
    Simulate ``plus - minus`` of two independent counting processes. The plus
    side contributes ``+j`` jumps, the minus side ``-j``. A time change is
    applied to the difference through one shared clock trajectory, or through
    independent clocks per side when ``spec.shared_clock`` is False.

    Returns:
        CountingPath: with signed jump sizes.
    """
    if not spec.is_skellam:
        raise DomainError("simulate_skellam needs a skellam spec, got '{}'".format(spec.kind), param='kind')
    horizon = _check_horizon(horizon)
    base = rng.child(0)
    plus_rng, minus_rng = base.child(0), base.child(1)
    if not spec.is_time_changed:
        parts = _base_parts(spec.plus, horizon, plus_rng) + _base_parts(spec.minus, horizon, minus_rng, sign=-1)
        return _merge(parts, horizon)
    clock_rng = rng.child(1)
    if spec.shared_clock:
        grid, clock = _clock_path(spec.time_change, horizon, clock_rng)
        minus_clock = None
    else:
        grid, clock = _clock_path(spec.time_change, horizon, clock_rng.child(0))
        _, minus_clock = _clock_path(spec.time_change, horizon, clock_rng.child(1))
    parts = _cell_parts(spec.plus.rates, grid, clock.values, plus_rng, single=spec.plus.kind == 'npp')
    minus_values = (minus_clock or clock).values
    parts += _cell_parts(spec.minus.rates, grid, minus_values, minus_rng, sign=-1, single=spec.minus.kind == 'npp')
    return _merge(parts, horizon, clock, minus_clock)


def simulate(spec, horizon, rng):
    """
    Simulate one trajectory of any :class:`ProcessSpec`.

    Returns:
        CountingPath
    """
    if spec.is_skellam:
        return simulate_skellam(spec, horizon, rng)
    return time_change(spec, horizon, rng)


class Compensator(object):
    """
    The compensator of a :class:`ProcessSpec` along a path's own clock c:

    .. math::
        A(t) = \\sum_j j (\\Lambda_j(c(t)) - T_j(c'(t)))

    where :math:`T_j` are the minus-side rates of a Skellam process and c' its
    minus clock. The exponential martingale uses

    .. math::
        \\psi(u, t) = \\sum_j (e^{uj}-1) \\Lambda_j(c(t)) + (e^{-uj}-1) T_j(c'(t)).
    """

    def __init__(self, spec):
        self.spec = spec
        self.plus_rates = list(spec.plus_rates)
        self.minus_rates = list(spec.minus_rates)

    def _cumulatives(self, path, t):
        c_plus = path.clock_at(t)
        lam = [r.cumulative(c_plus) for r in self.plus_rates]
        if self.minus_rates:
            c_minus = path.clock_at(t, minus=True)
            tau = [r.cumulative(c_minus) for r in self.minus_rates]
        else:
            tau = []
        return lam, tau

    def mean(self, path, t):
        """
        Args:
            path (CountingPath):
            t (float or np.ndarray): time(s) in ``[0, horizon]``.

        Returns:
            :math:`A(t)`.
        """
        lam, tau = self._cumulatives(path, t)
        ret = sum(j * x for j, x in enumerate(lam, 1))
        ret = ret - sum(j * x for j, x in enumerate(tau, 1)) if tau else ret
        return ret

    def exponent(self, path, u, t):
        """
        Returns:
            :math:`\\psi(u, t)`, so that :math:`\\exp(u X(t) - \\psi(u, t))` has unit mean.
        """
        u = float(u)
        lam, tau = self._cumulatives(path, t)
        ret = sum(np.expm1(u * j) * x for j, x in enumerate(lam, 1))
        for j, x in enumerate(tau, 1):
            ret = ret + np.expm1(-u * j) * x
        return ret

    def means(self, paths, times):
        """ :meth:`mean` for many paths, as an array of shape ``(len(paths), len(times))``. """
        times = np.asarray(times, dtype='float64')
        return np.array([self.mean(p, times) for p in paths], dtype='float64').reshape(len(paths), len(times))

    def exponents(self, paths, u, times):
        """ :meth:`exponent` for many paths, as an array of shape ``(len(paths), len(times))``. """
        times = np.asarray(times, dtype='float64')
        return np.array([self.exponent(p, u, times) for p in paths], dtype='float64').reshape(
            len(paths), len(times))
