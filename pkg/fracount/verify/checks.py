# -*- coding: utf-8 -*-
# File: checks.py

"""
Monte Carlo checks of martingale identities, moments, transforms and laws.

Each check reduces per-path contributions, taken in path-index order, to a
mean with a batch-means standard error, and returns :class:`CheckReport` objects.
"""

import numpy as np
from scipy import stats

from ..errors import DegenerateError, DomainError, ProbeError, SizingError, UnsupportedError
from ..processes import values_at
from ..rates import ConstantRate, RateFunction
from ..utils.stats import batch_means
from .oracles import oracle_space_fractional_pgf
from .report import DEFAULT_THRESHOLD, CheckReport, threshold_for_level
from .table import PathTable

__all__ = ['MartingaleProbe', 'TEST_FUNCTIONS', 'MIN_PATHS', 'MIN_DISTRIBUTION_SAMPLES',
           'check_exponential_martingale', 'check_compensated_martingale', 'check_moments',
           'check_distribution_equality', 'check_pgf_space_fractional', 'check_poisson_fit',
           'check_increment_correlation', 'check_transform', 'check_degenerate_reduction',
           'grid_bias_allowance']

MIN_PATHS = 1000
MIN_DISTRIBUTION_SAMPLES = 10000

# smallest expected count of a pooled chi-square cell
_MIN_EXPECTED = 5.

TEST_FUNCTIONS = ('one', 'value_at_s', 'indicator_above_median_at_s')


class MartingaleProbe(object):
    """
    Where martingale identities are probed.

    Attributes:
        u_values (list[float]): exponents of the exponential martingale.
        time_pairs (list[(float, float)]): pairs ``0 <= s <= t``.
        test_functions (list[str]): names from :data:`TEST_FUNCTIONS`, evaluated on the value at ``s``.
    """

    def __init__(self, u_values=(), time_pairs=(), test_functions=('one',)):
        self.u_values = [float(u) for u in u_values]
        if not all(np.isfinite(self.u_values)):
            raise DomainError("u_values must be finite, got {}".format(self.u_values), param='u_values')
        pairs = []
        for p in time_pairs:
            if len(p) != 2:
                raise DomainError("A time pair needs two entries, got {}".format(p), param='time_pairs')
            s, t = float(p[0]), float(p[1])
            if not (np.isfinite(s) and np.isfinite(t)) or s < 0 or s > t:
                raise DomainError("A time pair needs 0 <= s <= t, got ({}, {})".format(s, t), param='time_pairs')
            pairs.append((s, t))
        self.time_pairs = pairs
        for g in test_functions:
            if g not in TEST_FUNCTIONS:
                raise DomainError("Unknown test function '{}', choose from {}".format(g, list(TEST_FUNCTIONS)),
                                  param='test_functions')
        self.test_functions = list(test_functions)

    @property
    def t_values(self):
        """ Sorted distinct ``t`` of all pairs. """
        return sorted({t for _, t in self.time_pairs})

    @property
    def times(self):
        """ Sorted distinct times of all pairs. """
        return sorted({x for p in self.time_pairs for x in p})

    def validate(self, horizon):
        if self.time_pairs and self.times[-1] > horizon:
            raise DomainError("Probe time {} exceeds the horizon {}".format(self.times[-1], horizon),
                              param='time_pairs')

    def to_config(self):
        return {'u_values': list(self.u_values),
                'time_pairs': [list(p) for p in self.time_pairs],
                'test_functions': list(self.test_functions)}

    @staticmethod
    def from_config(cfg):
        known = {'u_values', 'time_pairs', 'test_functions'}
        for k in cfg:
            if k not in known:
                raise DomainError("Unknown probe field '{}'".format(k), param=k)
        return MartingaleProbe(cfg.get('u_values', ()), cfg.get('time_pairs', ()),
                               cfg.get('test_functions', ('one',)))

    def __repr__(self):
        return "MartingaleProbe({})".format(self.to_config())


def _check_paths(paths, minimum=MIN_PATHS):
    if len(paths) < minimum:
        raise SizingError("Need at least {} paths, got {}".format(minimum, len(paths)))


def _values(paths, times):
    if isinstance(paths, PathTable):
        return paths.values_at(times)
    return values_at(paths, times)


def _test_function(name, xs):
    if name == 'one':
        return np.ones(len(xs))
    if name == 'value_at_s':
        g = xs.astype('float64')
    else:
        g = (xs > np.median(xs)).astype('float64')
    if np.ptp(g) == 0:
        raise ProbeError("Test function '{}' is constant over all paths".format(name))
    return g


def check_exponential_martingale(paths, exponent_fn, probe, threshold=DEFAULT_THRESHOLD, notes=''):
    """
    Check :math:`E[\\exp(uX(t) - \\psi(u, t))] = 1` for every ``u`` of the probe and every ``t`` of its pairs.

    Args:
        paths (list[CountingPath] or PathTable):
        exponent_fn (callable): ``exponent_fn(paths, u, times)`` gives :math:`\\psi` per path and time,
            e.g. :meth:`Compensator.exponents`.
        probe (MartingaleProbe):

    Raises:
        ProbeError: when some summand overflows.
    """
    _check_paths(paths)
    ts = probe.t_values
    values = _values(paths, ts).astype('float64')
    ret = []
    for u in probe.u_values:
        psi = np.asarray(exponent_fn(paths, u, ts), dtype='float64')
        with np.errstate(over='ignore', invalid='ignore'):
            arg = u * values - psi
            contrib = np.exp(arg)
        if not (np.all(np.isfinite(arg)) and np.all(np.isfinite(contrib))):
            raise ProbeError("Exponential statistic overflows at u={}; use a smaller |u|".format(u))
        for k, t in enumerate(ts):
            mean, se = batch_means(contrib[:, k])
            ret.append(CheckReport('exponential_martingale', mean, se, 1., len(paths), notes=notes,
                                   threshold=threshold, u_or_v=u, t=t))
    return ret


def check_compensated_martingale(paths, compensator_fn, probe, threshold=DEFAULT_THRESHOLD, notes=''):
    """
    Check :math:`E[(X(t) - X(s) - (A(t) - A(s))) g] = 0` for every pair and test function ``g``
    of the probe, where ``g`` depends on the value at ``s`` only.

    Args:
        paths (list[CountingPath] or PathTable):
        compensator_fn (callable): ``compensator_fn(paths, times)`` gives :math:`A` per path and time,
            along each path's own clock, e.g. :meth:`Compensator.means`.
        probe (MartingaleProbe):

    Raises:
        ProbeError: when a test function other than ``one`` is constant.
    """
    _check_paths(paths)
    times = probe.times
    col = {t: k for k, t in enumerate(times)}
    values = _values(paths, times)
    mart = values - np.asarray(compensator_fn(paths, times), dtype='float64')
    ret = []
    for s, t in probe.time_pairs:
        inc = mart[:, col[t]] - mart[:, col[s]]
        for name in probe.test_functions:
            g = _test_function(name, values[:, col[s]])
            mean, se = batch_means(inc * g)
            ret.append(CheckReport('compensated_martingale/' + name, mean, se, 0., len(paths),
                                   notes=notes, threshold=threshold, s=s, t=t))
    return ret


def check_moments(samples, oracle_mean, oracle_var, allowance=(0., 0.), threshold=DEFAULT_THRESHOLD,
                  name='moments', t=None, notes=''):
    """
    Compare the sample mean and variance with their closed forms. The variance is
    the mean of squared deviations, with a batch-means (delta method) standard error.

    Args:
        samples (np.ndarray): one value per path, in path-index order.
        oracle_mean, oracle_var (float):
        allowance ((float, float)): widening of the mean and the variance band.

    Returns:
        [CheckReport, CheckReport]: mean, then variance.

    Raises:
        SizingError: with fewer than ``MIN_PATHS`` samples.
    """
    x = np.asarray(samples, dtype='float64').ravel()
    _check_paths(x)
    if not (np.isfinite(oracle_mean) and np.isfinite(oracle_var)):
        raise DomainError("Oracle moments must be finite, got {} and {}".format(oracle_mean, oracle_var))
    mean, se = batch_means(x)
    n = len(x)
    sq_mean, sq_se = batch_means((x - mean) ** 2)
    scale = n / (n - 1.)
    return [
        CheckReport(name + '/mean', mean, se, oracle_mean, n, notes=notes,
                    allowance=allowance[0], threshold=threshold, t=t),
        CheckReport(name + '/variance', sq_mean * scale, sq_se * scale, oracle_var, n, notes=notes,
                    allowance=allowance[1], threshold=threshold, t=t)]


def _pool(expected, need=_MIN_EXPECTED):
    """
    Group adjacent cells so each group's expected count reaches ``need``;
    a short remainder joins the last group.

    Returns:
        np.ndarray: start index of every group.
    """
    starts = [0]
    acc = 0.
    for i, e in enumerate(expected):
        acc += e
        if acc >= need and i + 1 < len(expected):
            starts.append(i + 1)
            acc = 0.
    if len(starts) > 1 and acc < need:
        starts.pop()
    if len(starts) < 2:
        raise DegenerateError("All mass falls into a single pooled cell")
    return np.asarray(starts)


def check_distribution_equality(samples_a, samples_b, level=0.01, name='distribution_equality', t=None,
                                min_samples=MIN_DISTRIBUTION_SAMPLES, notes=''):
    """
    Two-sample chi-square test that two integer samples share one law.
    Adjacent values are pooled until every expected cell count is at least 5.

    Raises:
        SizingError: below ``min_samples`` per sample.
        DegenerateError: when everything pools into one cell.
    """
    a = np.asarray(samples_a).ravel()
    b = np.asarray(samples_b).ravel()
    if min(len(a), len(b)) < min_samples:
        raise SizingError("Need at least {} samples per side, got {} and {}".format(min_samples, len(a), len(b)))
    support = np.union1d(a, b)
    counts = np.zeros((2, len(support)))
    counts[0] = np.bincount(np.searchsorted(support, a), minlength=len(support))
    counts[1] = np.bincount(np.searchsorted(support, b), minlength=len(support))
    totals = counts.sum(axis=0)
    # the smaller sample sets the smallest expected count of a column
    scale = min(len(a), len(b)) / float(len(a) + len(b))
    starts = _pool(totals * scale)
    table = np.add.reduceat(counts, starts, axis=1)
    chi2, p, dof, _ = stats.chi2_contingency(table, correction=False)
    return CheckReport(name, chi2, np.sqrt(2. * dof), dof, len(a) + len(b), notes=notes,
                       threshold=threshold_for_level(level), kind='chi2', p_value=p, t=t)


def check_poisson_fit(counts, mean, level=0.01, name='poisson_fit', s=None, t=None, notes=''):
    """
    Chi-square goodness of fit of nonnegative integer counts against Poisson(mean),
    with pooled cells and an upper tail cell.
    """
    x = np.asarray(counts).ravel()
    if len(x) == 0 or np.any(x < 0):
        raise DomainError("Counts must be a nonempty array of nonnegative integers", param='counts')
    mean = float(mean)
    top = int(max(x.max(), np.ceil(mean + 10 * np.sqrt(mean) + 10))) + 1
    probs = np.append(stats.poisson.pmf(np.arange(top), mean), stats.poisson.sf(top - 1, mean))
    expected = len(x) * probs
    observed = np.bincount(np.minimum(x, top).astype('int64'), minlength=top + 1).astype('float64')
    starts = _pool(expected)
    f_obs = np.add.reduceat(observed, starts)
    f_exp = np.add.reduceat(expected, starts)
    f_exp *= f_obs.sum() / f_exp.sum()
    chi2, p = stats.chisquare(f_obs, f_exp)
    dof = len(starts) - 1
    return CheckReport(name, chi2, np.sqrt(2. * dof), dof, len(x), notes=notes,
                       threshold=threshold_for_level(level), kind='chi2', p_value=p, s=s, t=t)


def check_increment_correlation(first, second, threshold=DEFAULT_THRESHOLD, name='increment_correlation',
                                s=None, t=None, notes=''):
    """
    Check that two increments (over disjoint intervals) are uncorrelated: the mean
    of the standardized products has target 0.
    """
    x = np.asarray(first, dtype='float64').ravel()
    y = np.asarray(second, dtype='float64').ravel()
    if len(x) != len(y):
        raise DomainError("Increment samples differ in length: {} and {}".format(len(x), len(y)))
    sx, sy = x.std(), y.std()
    if sx == 0 or sy == 0:
        raise DegenerateError("An increment is constant over all paths")
    mean, se = batch_means((x - x.mean()) * (y - y.mean()) / (sx * sy))
    return CheckReport(name, mean, se, 0., len(x), notes=notes, threshold=threshold, s=s, t=t)


def check_transform(samples, target, name, allowance=0., threshold=DEFAULT_THRESHOLD,
                    u_or_v=None, s=None, t=None, notes=''):
    """
    Compare the mean of per-path samples, e.g. :math:`e^{-sX(t)}`, with a target.
    """
    x = np.asarray(samples, dtype='float64').ravel()
    if not np.all(np.isfinite(x)):
        raise ProbeError("Non-finite samples in check '{}'".format(name))
    mean, se = batch_means(x)
    return CheckReport(name, mean, se, target, len(x), notes=notes, allowance=allowance,
                       threshold=threshold, u_or_v=u_or_v, s=s, t=t)


def check_pgf_space_fractional(paths, lambda_const, beta, v_values, t, threshold=DEFAULT_THRESHOLD, notes=''):
    """
    Check :math:`E[v^{N(D_\\beta(t))}] = e^{-t\\lambda^\\beta(1-v)^\\beta}` for a
    constant-rate Poisson process on a stable clock, whose moments do not exist.

    Args:
        lambda_const (float or ConstantRate):
        v_values (list[float]): in ``(0, 1]``.

    Raises:
        UnsupportedError: for a non-constant rate.
    """
    if isinstance(lambda_const, RateFunction):
        if not isinstance(lambda_const, ConstantRate):
            raise UnsupportedError("The space-fractional pgf needs a constant rate, got {}".format(lambda_const))
        lambda_const = lambda_const.lam
    _check_paths(paths)
    n = _values(paths, [t])[:, 0].astype('float64')
    if np.any(n < 0):
        raise DomainError("The pgf needs nonnegative counts", param='paths')
    ret = []
    for v in v_values:
        v = float(v)
        if not 0 < v <= 1:
            raise DomainError("v must lie in (0, 1], got {}".format(v), param='v_values')
        target = oracle_space_fractional_pgf(lambda_const, beta, v, t)
        ret.append(check_transform(v ** n, target, 'pgf', threshold=threshold, u_or_v=v, t=t, notes=notes))
    return ret


def check_degenerate_reduction(paths, reference_paths, name='degenerate_reduction', notes=''):
    """
    Check that two path sets are bit-identical pairwise: the statistic is the
    fraction of identical pairs, with target 1 and no standard error.
    """
    if len(paths) != len(reference_paths):
        raise DomainError("Path sets differ in size: {} and {}".format(len(paths), len(reference_paths)))
    if not len(paths):
        raise SizingError("No paths to compare")
    same = sum(1 for a, b in zip(paths, reference_paths) if a.same_jumps(b))
    return CheckReport(name, same / float(len(paths)), 0., 1., len(paths), notes=notes)


def grid_bias_allowance(stat_step, stat_half_step):
    """
    Extrapolated bias of a statistic linear in the grid step ``h``:
    ``|2 (stat(h) - stat(h/2))|``.
    """
    return abs(2. * (float(stat_step) - float(stat_half_step)))
