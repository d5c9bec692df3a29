# -*- coding: utf-8 -*-
import unittest
import numpy as np
from scipy import stats
from scipy.special import gamma

from .errors import DomainError, InsufficientPathError, OrderingError
from .sampling import RngStream
from .subordinators import (
    MonotonePath, SubordinatorSpec, clock_values, first_passage, inverse_values, mixed_path,
    stable_path, subordinate_at, tempered_path, time_grid)


def _mean_se(x):
    x = np.asarray(x, dtype='float64')
    return x.mean(), x.std(ddof=1) / np.sqrt(len(x))


def _var_se(x):
    x = np.asarray(x, dtype='float64')
    return x.var(ddof=1), np.std((x - x.mean()) ** 2) / np.sqrt(len(x))


class MonotonePathTest(unittest.TestCase):
    def testInvariants(self):
        with self.assertRaises(DomainError):
            MonotonePath([0.1, 0.2], [0, 1])
        with self.assertRaises(OrderingError):
            MonotonePath([0, 0.2, 0.2], [0, 1, 2])
        with self.assertRaises(OrderingError):
            MonotonePath([0, 0.1, 0.2], [0, 2, 1])
        p = MonotonePath([0, 1, 2], [0, 0.5, 3])
        self.assertEqual(p.value_at(1.5), 0.5)
        self.assertEqual(p.value_at(2), 3)

    def testTimeGrid(self):
        g = time_grid(1., 0.3)
        self.assertEqual(g[0], 0)
        self.assertEqual(g[-1], 1.)
        self.assertTrue(np.all(np.diff(g) > 0))
        self.assertEqual(len(time_grid(1., 1e-3)), 1001)


class StablePathTest(unittest.TestCase):
    def testShape(self):
        for alpha in [0.2, 0.5, 0.9]:
            p = stable_path(alpha, 1., 0.01, RngStream(1))
            self.assertEqual(len(p), 101)
            self.assertEqual(p.values[0], 0)
            self.assertTrue(np.all(np.diff(p.values) > 0))
            self.assertGreaterEqual(p.extent, 1.)

    def testLaplace(self):
        alpha = 0.7
        x = np.array([stable_path(alpha, 1., 0.1, RngStream(2, i)).value_at(1.) for i in range(20000)])
        for s in [0.5, 1., 2.]:
            m, se = _mean_se(np.exp(-s * x))
            self.assertLess(abs(m - np.exp(-s ** alpha)), 4 * se)

    def testSelfSimilarity(self):
        alpha, step = 0.6, 0.01
        a = np.diff(stable_path(alpha, 100., 2 * step, RngStream(3)).values)
        b = 2 ** (1 / alpha) * np.diff(stable_path(alpha, 100., step, RngStream(4)).values)
        self.assertGreater(stats.ks_2samp(a, b).pvalue, 0.01)

    def testDomain(self):
        with self.assertRaises(DomainError):
            stable_path(1.2, 1., 0.1, RngStream(0))
        with self.assertRaises(DomainError):
            stable_path(0.5, 1., 2., RngStream(0))


class TemperedPathTest(unittest.TestCase):
    def testMoments(self):
        beta, theta = 0.6, 2.
        x = np.array([tempered_path(beta, theta, 1., 0.1, RngStream(5, i)).value_at(1.) for i in range(20000)])
        m, se = _mean_se(x)
        self.assertLess(abs(m - beta * theta ** (beta - 1)), 4 * se)
        v, se = _var_se(x)
        self.assertLess(abs(v - beta * (1 - beta) * theta ** (beta - 2)), 4 * se)

    def testSplitting(self):
        beta, theta = 0.6, 100.
        p = tempered_path(beta, theta, 4., 1., RngStream(6))
        self.assertEqual(len(p), 5)
        self.assertTrue(np.all(np.diff(p.values) > 0))


class MixedPathTest(unittest.TestCase):
    def testDegenerate(self):
        for i in range(5):
            a = mixed_path(0.4, 0.8, 1., 0., 1., 0.01, RngStream(7, i))
            b = stable_path(0.4, 1., 0.01, RngStream(7, i))
            self.assertTrue(np.array_equal(a.values, b.values))
            self.assertTrue(np.array_equal(a.times, b.times))

    def testLaplace(self):
        c1, c2 = 0.5, 0.5
        x = np.array([mixed_path(0.4, 0.8, c1, c2, 1., 0.1, RngStream(8, i)).value_at(1.) for i in range(20000)])
        for s in [0.5, 1., 2.]:
            m, se = _mean_se(np.exp(-s * x))
            self.assertLess(abs(m - np.exp(-(c1 * s ** 0.4 + c2 * s ** 0.8))), 4 * se)

    def testDomain(self):
        with self.assertRaises(DomainError):
            mixed_path(0.8, 0.4, 0.5, 0.5, 1., 0.1, RngStream(0))
        with self.assertRaises(DomainError):
            mixed_path(0.4, 0.8, 0.5, 0.6, 1., 0.1, RngStream(0))


class FirstPassageTest(unittest.TestCase):
    def testLinear(self):
        times = np.arange(11.)
        p = MonotonePath(times, 2 * times)
        self.assertEqual(first_passage(p, 4.), 2.)
        self.assertEqual(first_passage(p, 0.), 0.)
        self.assertEqual(first_passage(p, 4.5), 2.)
        levels = np.linspace(0, 19.9, 50)
        self.assertTrue(np.all(np.diff(first_passage(p, levels)) >= 0))
        with self.assertRaises(InsufficientPathError):
            first_passage(p, 20.)


class InverseValuesTest(unittest.TestCase):
    def testIdentity(self):
        q = np.array([0., 0.3, 0.3, 2.])
        for spec in [SubordinatorSpec('identity'), SubordinatorSpec('inverse_stable', alpha=1)]:
            self.assertTrue(np.array_equal(inverse_values(spec, q, RngStream(0)), q))

    def testMoments(self):
        step = 1e-3
        spec = SubordinatorSpec('inverse_stable', step, alpha=0.5)
        y = np.array([inverse_values(spec, [1.], RngStream(9, i))[0] for i in range(5000)])
        m, se = _mean_se(y)
        self.assertLess(abs(m - 2 / np.sqrt(np.pi)), 4 * se + 2 * step)
        v, se = _var_se(y)
        self.assertLess(abs(v - (2 - 4 / np.pi)), 4 * se + 4 * step)

    def testMonotone(self):
        spec = SubordinatorSpec('inverse_mixed', 0.01, alpha1=0.4, alpha2=0.8, c1=0.3, c2=0.7)
        q = np.linspace(0, 50, 200)
        y = inverse_values(spec, q, RngStream(10))
        self.assertEqual(y[0], 0)
        self.assertTrue(np.all(np.diff(y) >= 0))

    def testIncrementsWithinDriverSegment(self):
        p = stable_path(0.7, 10., 0.01, RngStream(14))
        levels = np.linspace(0, 0.9 * p.values[-1], 400)
        y = first_passage(p, levels)
        self.assertTrue(np.all(np.diff(y) >= 0))
        for t1, t2, y1, y2 in zip(levels[:-1], levels[1:], y[:-1], y[1:]):
            last_below = p.times[np.searchsorted(p.values, t1, side='right') - 1]
            first_above = p.times[np.searchsorted(p.values, t2, side='right')]
            self.assertLessEqual(y2 - y1, first_above - last_below)
            if first_above - last_below <= 0.01 + 1e-12:
                # both levels are crossed by the same driver jump
                self.assertEqual(y1, y2)

    def testBadInput(self):
        with self.assertRaises(OrderingError):
            inverse_values(SubordinatorSpec('inverse_stable', alpha=0.5), [1., 0.5], RngStream(0))
        with self.assertRaises(DomainError):
            inverse_values(SubordinatorSpec('stable', alpha=0.5), [1.], RngStream(0))


class SubordinateAtTest(unittest.TestCase):
    def testFlatInput(self):
        out = subordinate_at(0.5, 1., [0.7] * 5, RngStream(11))
        self.assertTrue(np.all(out == out[0]))
        self.assertGreater(out[0], 0)
        self.assertTrue(np.all(subordinate_at(0.5, 1., np.zeros(3), RngStream(11)) == 0))
        with self.assertRaises(OrderingError):
            subordinate_at(0.5, 1., [1., 0.5], RngStream(0))

    def testMatchesPath(self):
        beta, theta = 0.6, 2.
        grid = time_grid(1., 0.25)
        a = np.array([subordinate_at(beta, theta, grid, RngStream(12, i))[-1] for i in range(5000)])
        b = np.array([tempered_path(beta, theta, 1., 0.25, RngStream(13, i)).values[-1] for i in range(5000)])
        self.assertGreater(stats.ks_2samp(a, b).pvalue, 0.01)

    def testComposition(self):
        beta, theta, alpha = 0.6, 2., 0.8
        spec = SubordinatorSpec('tempered_of_inverse_stable', 0.01, alpha=alpha, beta=beta, theta=theta)
        x = np.array([clock_values(spec, [1.], RngStream(14, i))[0] for i in range(5000)])
        m, se = _mean_se(x)
        target = beta * theta ** (beta - 1) / gamma(alpha + 1)
        self.assertLess(abs(m - target), 4 * se + 0.01)


class ClockValuesTest(unittest.TestCase):
    def testAllKinds(self):
        q = time_grid(2., 0.05)
        specs = [
            SubordinatorSpec('identity'),
            SubordinatorSpec('stable', alpha=0.7),
            SubordinatorSpec('tempered', beta=0.5, theta=3.),
            SubordinatorSpec('mixed', alpha1=0.3, alpha2=0.9, c1=0.5, c2=0.5),
            SubordinatorSpec('inverse_stable', 0.01, alpha=0.6),
            SubordinatorSpec('inverse_mixed', 0.01, alpha1=0.3, alpha2=0.9, c1=0.5, c2=0.5),
            SubordinatorSpec('tempered_of_inverse_stable', 0.01, alpha=0.6, beta=0.5, theta=3.),
        ]
        for spec in specs:
            c = clock_values(spec, q, RngStream(15))
            self.assertEqual(c.shape, q.shape)
            self.assertEqual(c[0], 0, spec)
            self.assertTrue(np.all(np.diff(c) >= 0), spec)
            # same stream, same trajectory
            self.assertTrue(np.array_equal(c, clock_values(spec, q, RngStream(15))))
        self.assertTrue(np.array_equal(clock_values(specs[0], q, RngStream(15)), q))


class SubordinatorSpecTest(unittest.TestCase):
    def testValidation(self):
        with self.assertRaises(DomainError) as ctx:
            SubordinatorSpec('inverse_stable', alpha=1.5)
        self.assertEqual(ctx.exception.param, 'alpha')
        with self.assertRaises(DomainError):
            SubordinatorSpec('stable', alpha=1.)
        with self.assertRaises(DomainError):
            SubordinatorSpec('tempered', beta=0.5)
        with self.assertRaises(DomainError):
            SubordinatorSpec('tempered', beta=0.5, theta=0.)
        with self.assertRaises(DomainError):
            SubordinatorSpec('inverse_mixed', alpha1=0.5, alpha2=0.5, c1=0.5, c2=0.5)
        with self.assertRaises(DomainError):
            SubordinatorSpec('gamma', alpha=0.5)
        with self.assertRaises(DomainError):
            SubordinatorSpec('identity', alpha=0.5)
        with self.assertRaises(DomainError):
            SubordinatorSpec('identity', grid_step=0)

    def testConfig(self):
        cfg = {'kind': 'inverse_stable', 'alpha': 0.7, 'grid_step': 0.001}
        spec = SubordinatorSpec.from_config(cfg)
        self.assertEqual(spec.to_config(), cfg)
        self.assertEqual(spec.alpha, 0.7)
        self.assertFalse(spec.is_identity)
        self.assertEqual(spec.driver().kind, 'stable')
        spec = SubordinatorSpec.from_config({'kind': 'tempered', 'beta': 0.6, 'theta': 2})
        self.assertEqual(spec.grid_step, 1e-3)
        self.assertTrue(spec.has_moments)
        self.assertFalse(SubordinatorSpec('stable', alpha=0.5).has_moments)


if __name__ == '__main__':
    unittest.main()
