# -*- coding: utf-8 -*-
import unittest
import numpy as np

from ..errors import DegenerateError, DomainError, ProbeError, SizingError, UnsupportedError
from ..processes import Compensator, ProcessSpec, simulate, values_at
from ..rates import ConstantRate, PowerLawRate
from ..sampling import RngStream
from ..subordinators import SubordinatorSpec
from .checks import (
    TEST_FUNCTIONS, MartingaleProbe, check_compensated_martingale, check_degenerate_reduction,
    check_distribution_equality, check_exponential_martingale, check_increment_correlation, check_moments,
    check_pgf_space_fractional, check_poisson_fit, check_transform, grid_bias_allowance)


def _paths(spec, n, seed=1, horizon=1.):
    return [simulate(spec, horizon, RngStream(seed, i)) for i in range(n)]


class MartingaleProbeTest(unittest.TestCase):
    def testValidation(self):
        p = MartingaleProbe([0, 1], [(0.5, 1), (0.25, 0.5), (1, 1)], ['one', 'value_at_s'])
        self.assertEqual(p.t_values, [0.5, 1.])
        self.assertEqual(p.times, [0.25, 0.5, 1.])
        p.validate(1.)
        with self.assertRaises(DomainError):
            p.validate(0.75)
        with self.assertRaises(DomainError):
            MartingaleProbe(time_pairs=[(1, 0.5)])
        with self.assertRaises(DomainError):
            MartingaleProbe(u_values=[float('inf')])
        with self.assertRaises(DomainError):
            MartingaleProbe(test_functions=['square'])
        self.assertEqual(MartingaleProbe.from_config(p.to_config()).to_config(), p.to_config())


class ExponentialMartingaleTest(unittest.TestCase):
    def testNPP(self):
        spec = ProcessSpec('npp', rate=PowerLawRate(1, 2))
        paths = _paths(spec, 3000)
        probe = MartingaleProbe([-1, 0, 0.5], [(0, 0.5), (0, 1)])
        reports = check_exponential_martingale(paths, Compensator(spec).exponents, probe)
        self.assertEqual(len(reports), 6)
        for r in reports:
            self.assertTrue(r.passed, r)
            if r.u_or_v == 0:
                self.assertEqual((r.statistic, r.std_error), (1., 0.))

    def testNGCP(self):
        spec = ProcessSpec('ngcp', rates=[ConstantRate(0.5), ConstantRate(0.3), ConstantRate(0.2)])
        paths = _paths(spec, 3000, seed=2)
        reports = check_exponential_martingale(paths, Compensator(spec).exponents, MartingaleProbe([0.5], [(0, 1)]))
        self.assertTrue(reports[0].passed, reports[0])

    def testErrors(self):
        spec = ProcessSpec('npp', rate=ConstantRate(5))
        probe = MartingaleProbe([1000.], [(0, 1)])
        with self.assertRaises(ProbeError):
            check_exponential_martingale(_paths(spec, 1000), Compensator(spec).exponents, probe)
        with self.assertRaises(SizingError):
            check_exponential_martingale(_paths(spec, 10), Compensator(spec).exponents, probe)


class CompensatedMartingaleTest(unittest.TestCase):
    probe = MartingaleProbe(time_pairs=[(0.25, 0.5), (0.5, 1), (1, 1)], test_functions=TEST_FUNCTIONS)

    def testNPP(self):
        spec = ProcessSpec('npp', rate=PowerLawRate(2, 2))
        reports = check_compensated_martingale(_paths(spec, 3000), Compensator(spec).means, self.probe)
        self.assertEqual(len(reports), 9)
        for r in reports:
            self.assertTrue(r.passed, r)
            if r.s == r.t:
                self.assertEqual((r.statistic, r.std_error), (0., 0.))

    def testTimeChanged(self):
        spec = ProcessSpec('ngcp', rates=[ConstantRate(2), ConstantRate(1)],
                           time_change=SubordinatorSpec('inverse_stable', 0.01, alpha=0.7))
        reports = check_compensated_martingale(_paths(spec, 3000, seed=3), Compensator(spec).means, self.probe)
        for r in reports:
            self.assertTrue(r.passed, r)

    def testDegenerate(self):
        spec = ProcessSpec('npp', rate=ConstantRate(0))
        paths = _paths(spec, 1000)
        r = check_compensated_martingale(paths, Compensator(spec).means, MartingaleProbe(time_pairs=[(0.5, 1)]))[0]
        self.assertEqual((r.statistic, r.std_error), (0., 0.))
        self.assertTrue(r.passed)
        with self.assertRaises(ProbeError):
            check_compensated_martingale(paths, Compensator(spec).means,
                                         MartingaleProbe(time_pairs=[(0.5, 1)], test_functions=['value_at_s']))


class MomentsTest(unittest.TestCase):
    def testConstant(self):
        reports = check_moments(np.full(1000, 2.5), 2.5, 0.)
        for r in reports:
            self.assertTrue(r.passed)
            self.assertEqual(r.statistic, r.target)
            self.assertEqual(r.std_error, 0.)

    def testNormal(self):
        x = RngStream(4).generator.normal(2., 3., 20000)
        mean, var = check_moments(x, 2., 9.)
        self.assertTrue(mean.passed, mean)
        self.assertTrue(var.passed, var)
        mean, var = check_moments(x, 2.5, 7.)
        self.assertFalse(mean.passed)
        self.assertFalse(var.passed)
        mean, var = check_moments(x, 2.5, 7., allowance=(0.6, 2.5))
        self.assertTrue(mean.passed and var.passed)

    def testErrors(self):
        with self.assertRaises(SizingError):
            check_moments(np.ones(50), 1., 0.)
        with self.assertRaises(SizingError):
            check_moments(np.ones(999), 1., 0.)
        with self.assertRaises(DomainError):
            check_moments(np.ones(1000), np.nan, 0.)


class DistributionTest(unittest.TestCase):
    def testEquality(self):
        g = RngStream(5).generator
        a = g.poisson(1.0, 10000)
        r = check_distribution_equality(a, a.copy())
        self.assertEqual(r.p_value, 1.)
        self.assertTrue(r.passed)
        self.assertTrue(check_distribution_equality(a, g.poisson(1.0, 12000)).passed)
        self.assertFalse(check_distribution_equality(a, g.poisson(1.3, 10000)).passed)

    def testConstructions(self):
        rates = [ConstantRate(0.5), ConstantRate(0.3), ConstantRate(0.2)]
        weighted = values_at(_paths(ProcessSpec('ngcp', rates=rates), 10000, seed=6), [1.])[:, 0]
        marked = values_at(_paths(ProcessSpec('ngcp', rates=rates, construction='marked'), 10000, seed=7), [1.])[:, 0]
        self.assertTrue(check_distribution_equality(weighted, marked).passed)

    def testErrors(self):
        with self.assertRaises(SizingError):
            check_distribution_equality(np.zeros(100), np.zeros(100))
        with self.assertRaises(DegenerateError):
            check_distribution_equality(np.zeros(10000), np.zeros(10000))

    def testPoissonFit(self):
        spec = ProcessSpec('npp', rate=PowerLawRate(1, 2))
        v = values_at(_paths(spec, 3000, seed=8), [0.5, 1.])
        inc = v[:, 1] - v[:, 0]
        self.assertTrue(check_poisson_fit(inc, 0.75).passed)
        self.assertFalse(check_poisson_fit(inc, 1.5).passed)
        with self.assertRaises(DegenerateError):
            check_poisson_fit(np.zeros(1000, dtype='int64'), 0.)
        with self.assertRaises(DomainError):
            check_poisson_fit(-np.ones(10, dtype='int64'), 1.)


class IncrementTest(unittest.TestCase):
    def testCorrelation(self):
        spec = ProcessSpec('npp', rate=ConstantRate(3))
        v = values_at(_paths(spec, 3000, seed=9), [0., 0.5, 1.])
        first, second = v[:, 1] - v[:, 0], v[:, 2] - v[:, 1]
        self.assertTrue(check_increment_correlation(first, second).passed)
        self.assertFalse(check_increment_correlation(first, first).passed)
        with self.assertRaises(DegenerateError):
            check_increment_correlation(first, np.zeros(len(first)))

    def testTransform(self):
        x = RngStream(10).generator.exponential(2., 10000)
        self.assertTrue(check_transform(np.exp(-x), 1. / 3, 'laplace', u_or_v=1.).passed)
        self.assertFalse(check_transform(np.exp(-x), 0.4, 'laplace').passed)
        with self.assertRaises(ProbeError):
            check_transform(np.full(1000, np.inf), 1., 'laplace')


class SpaceFractionalTest(unittest.TestCase):
    def testPgf(self):
        spec = ProcessSpec('npp', rate=ConstantRate(1), time_change=SubordinatorSpec('stable', 0.01, alpha=0.5))
        reports = check_pgf_space_fractional(_paths(spec, 3000, seed=11), ConstantRate(1), 0.5,
                                             [0.3, 0.5, 0.8, 1.], 1.)
        for r in reports:
            self.assertTrue(r.passed, r)
        self.assertEqual((reports[-1].statistic, reports[-1].std_error), (1., 0.))
        self.assertAlmostEqual(reports[1].target, np.exp(-np.sqrt(0.5)))

    def testEmpty(self):
        spec = ProcessSpec('npp', rate=ConstantRate(0), time_change=SubordinatorSpec('stable', 0.01, alpha=0.5))
        for r in check_pgf_space_fractional(_paths(spec, 1000), 0., 0.5, [0.3, 0.5], 1.):
            self.assertEqual((r.statistic, r.target), (1., 1.))

    def testErrors(self):
        with self.assertRaises(UnsupportedError):
            check_pgf_space_fractional([], PowerLawRate(1, 2), 0.5, [0.5], 1.)
        spec = ProcessSpec('npp', rate=ConstantRate(1))
        with self.assertRaises(DomainError):
            check_pgf_space_fractional(_paths(spec, 1000), 1., 0.5, [0.], 1.)


class ReductionTest(unittest.TestCase):
    def testIdentityClock(self):
        base = ProcessSpec('ngcp', rates=[PowerLawRate(1, 2), ConstantRate(0.5)])
        for clock in [SubordinatorSpec('identity'), SubordinatorSpec('inverse_stable', alpha=1)]:
            spec = ProcessSpec('ngcp', rates=base.rates, time_change=clock)
            r = check_degenerate_reduction(_paths(spec, 200), _paths(base, 200))
            self.assertEqual(r.statistic, 1.)
            self.assertTrue(r.passed)
        r = check_degenerate_reduction(_paths(base, 200, seed=1), _paths(base, 200, seed=2))
        self.assertFalse(r.passed)
        with self.assertRaises(DomainError):
            check_degenerate_reduction(_paths(base, 2), _paths(base, 3))

    def testGridBias(self):
        self.assertAlmostEqual(grid_bias_allowance(1.1, 1.05), 0.1)
        self.assertEqual(grid_bias_allowance(1., 1.), 0.)


if __name__ == '__main__':
    unittest.main()
