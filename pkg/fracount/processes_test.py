# -*- coding: utf-8 -*-
import unittest
import numpy as np
from scipy.special import gamma

from .errors import DomainError, UnboundedRateError
from .processes import (
    CountingPath, Compensator, ProcessSpec, evaluate, simulate, simulate_ngcp, simulate_ngcp_marked,
    simulate_npp, simulate_skellam, time_change, values_at)
from .rates import ConstantRate, PiecewiseConstantRate, PowerLawRate
from .sampling import RngStream
from .subordinators import SubordinatorSpec


def _mean_se(x):
    x = np.asarray(x, dtype='float64')
    return x.mean(), x.std(ddof=1) / np.sqrt(len(x))


def _final_values(func, n, seed, horizon=1.):
    return np.array([func(RngStream(seed, i)).value(horizon) for i in range(n)])


class CountingPathTest(unittest.TestCase):
    def testEvaluate(self):
        p = CountingPath([0.5, 0.7], [1, 2], 1.)
        self.assertEqual(evaluate(p, 0), 0)
        self.assertEqual(evaluate(p, 0.7), 3)
        self.assertEqual(evaluate(p, np.nextafter(0.5, 0)), 0)
        self.assertEqual(evaluate(p, 0.5), 1)
        self.assertTrue(np.array_equal(values_at([p, p], [0, 0.6, 1]), [[0, 1, 3], [0, 1, 3]]))

    def testInvalid(self):
        p = CountingPath([0.5], [1], 1.)
        with self.assertRaises(DomainError):
            evaluate(p, 1.5)
        with self.assertRaises(DomainError):
            evaluate(p, -0.1)
        with self.assertRaises(DomainError):
            CountingPath([0.5, 0.4], [1, 1], 1.)
        with self.assertRaises(DomainError):
            CountingPath([0.5], [0], 1.)
        with self.assertRaises(DomainError):
            CountingPath([1.5], [1], 1.)


class NPPTest(unittest.TestCase):
    def testZeroRate(self):
        p = simulate_npp(ConstantRate(0), 5., RngStream(0))
        self.assertEqual(len(p), 0)
        p = simulate_npp(PiecewiseConstantRate([1], [0, 0]), 5., RngStream(0))
        self.assertEqual(len(p), 0)

    def testPowerLawCounts(self):
        rate = PowerLawRate(1, 2)
        x = _final_values(lambda rng: simulate_npp(rate, 1., rng), 20000, 1)
        m, _ = _mean_se(x)
        self.assertLess(abs(m - 1), 4 * np.sqrt(1. / len(x)))
        m, se = _mean_se(x == 0)
        self.assertLess(abs(m - np.exp(-1)), 4 * se)

    def testThinning(self):
        rate = PiecewiseConstantRate([0.5], [1, 3])
        paths = [simulate_npp(rate, 1., RngStream(2, i)) for i in range(10000)]
        v = values_at(paths, [0.5, 1.])
        for col, target in [(v[:, 0], 0.5), (v[:, 1] - v[:, 0], 1.5)]:
            m, _ = _mean_se(col)
            self.assertLess(abs(m - target), 4 * np.sqrt(target / len(col)))

    def testJumpSizes(self):
        p = simulate_npp(ConstantRate(5), 2., RngStream(3))
        self.assertGreater(len(p), 0)
        self.assertTrue(np.all(p.jump_sizes == 1))
        self.assertTrue(np.all(np.diff(p.jump_times) > 0))
        self.assertLessEqual(p.jump_times[-1], 2.)


class NGCPTest(unittest.TestCase):
    rates = [ConstantRate(0.5), ConstantRate(0.3), ConstantRate(0.2)]

    def testSingleComponent(self):
        for rate in [PowerLawRate(2, 1.5), PiecewiseConstantRate([0.3], [4, 1])]:
            for i in range(20):
                a = simulate_ngcp([rate], 1., RngStream(4, i))
                b = simulate_npp(rate, 1., RngStream(4, i).child(0))
                self.assertTrue(a.same_jumps(b))

    def testWeightedMoments(self):
        x = _final_values(lambda rng: simulate_ngcp(self.rates, 1., rng), 20000, 5)
        m, se = _mean_se(x)
        self.assertLess(abs(m - 1.7), 4 * se)
        u = 0.3
        target = np.exp(sum(r.lam * np.expm1(u * j) for j, r in enumerate(self.rates, 1)))
        m, se = _mean_se(np.exp(u * x))
        self.assertLess(abs(m - target), 4 * se)

    def testMarked(self):
        paths = [simulate_ngcp_marked(self.rates, 1., RngStream(6, i)) for i in range(20000)]
        sizes = np.concatenate([p.jump_sizes for p in paths])
        self.assertTrue(set(np.unique(sizes)) <= {1, 2, 3})
        m, se = _mean_se([p.value(1.) for p in paths])
        self.assertLess(abs(m - 1.7), 4 * se)

    def testMarkedUnbounded(self):
        with self.assertRaises(UnboundedRateError):
            simulate_ngcp_marked([PowerLawRate(1, 0.5)], 1., RngStream(0))
        self.assertEqual(len(simulate_ngcp_marked([ConstantRate(0)], 1., RngStream(0))), 0)


class TimeChangeTest(unittest.TestCase):
    def testIdentityClock(self):
        identity = SubordinatorSpec('identity')
        specs = [
            ProcessSpec('npp', rate=PowerLawRate(1, 2)),
            ProcessSpec('ngcp', rates=[ConstantRate(0.5), PiecewiseConstantRate([0.5], [0.1, 1])]),
            ProcessSpec('skellam', plus=ProcessSpec('npp', rate=ConstantRate(1)),
                        minus=ProcessSpec('ngcp', rates=[ConstantRate(1), ConstantRate(0.5)])),
        ]
        for spec in specs:
            cfg = spec.to_config()
            for clock in [identity, SubordinatorSpec('inverse_stable', alpha=1)]:
                cfg['time_change'] = clock.to_config()
                changed = ProcessSpec.from_config(cfg)
                for i in range(10):
                    a = simulate(changed, 1., RngStream(7, i))
                    b = simulate(spec, 1., RngStream(7, i))
                    self.assertTrue(a.same_jumps(b))
        a = time_change(ProcessSpec('npp', rate=ConstantRate(3), time_change=identity), 1., RngStream(8))
        b = simulate_npp(ConstantRate(3), 1., RngStream(8).child(0))
        self.assertTrue(a.same_jumps(b))

    def testGridJumps(self):
        spec = ProcessSpec('ngcp', rates=[ConstantRate(2), ConstantRate(1)],
                           time_change=SubordinatorSpec('inverse_stable', 0.01, alpha=0.6))
        p = simulate(spec, 1., RngStream(9))
        self.assertIsNotNone(p.clock)
        self.assertTrue(np.all(np.diff(p.jump_times) >= 0))
        on_grid = np.abs(p.jump_times / 0.01 - np.round(p.jump_times / 0.01))
        self.assertTrue(np.all(on_grid < 1e-6))
        self.assertTrue(set(p.jump_sizes.tolist()) <= {1, 2})
        self.assertEqual(p.value(1.), p.jump_sizes.sum())

    def testTimeChangedUnitJumps(self):
        for clock in [SubordinatorSpec('tempered', 0.01, beta=0.6, theta=2.),
                      SubordinatorSpec('inverse_stable', 0.01, alpha=0.7)]:
            spec = ProcessSpec('npp', rate=ConstantRate(50), time_change=clock)
            for i in range(50):
                p = simulate(spec, 1., RngStream(12, i))
                self.assertTrue(np.all(p.jump_sizes == 1), clock)
                grid_values = p.value(np.linspace(0, 1, 101))
                self.assertTrue(np.all(np.diff(grid_values) >= 0))

    def testTimeChangedSkellamSizes(self):
        side = ProcessSpec('ngcp', rates=[ConstantRate(5), ConstantRate(5)])
        spec = ProcessSpec('skellam', plus=side, minus=side,
                           time_change=SubordinatorSpec('inverse_stable', 0.01, alpha=0.7))
        for i in range(20):
            p = simulate(spec, 1., RngStream(13, i))
            self.assertTrue(set(p.jump_sizes.tolist()) <= {-2, -1, 1, 2})

    def testNTFPPMean(self):
        step = 1e-3
        spec = ProcessSpec('npp', rate=ConstantRate(1), time_change=SubordinatorSpec('inverse_stable', step, alpha=0.5))
        x = _final_values(lambda rng: simulate(spec, 1., rng), 4000, 10)
        m, se = _mean_se(x)
        self.assertLess(abs(m - 2 / np.sqrt(np.pi)), 4 * se + 2 * step)

    def testNTSTFPPMean(self):
        beta, theta, alpha = 0.6, 2., 0.8
        spec = ProcessSpec('npp', rate=ConstantRate(1), time_change=SubordinatorSpec(
            'tempered_of_inverse_stable', 0.01, alpha=alpha, beta=beta, theta=theta))
        x = _final_values(lambda rng: simulate(spec, 1., rng), 4000, 11)
        target = beta * theta ** (beta - 1) / gamma(alpha + 1)
        m, se = _mean_se(x)
        self.assertLess(abs(m - target), 4 * se + 0.02)


class SkellamTest(unittest.TestCase):
    def _spec(self, **kwargs):
        return ProcessSpec('skellam', plus=ProcessSpec('ngcp', rates=[ConstantRate(0.6), ConstantRate(0.3)]),
                           minus=ProcessSpec('ngcp', rates=[ConstantRate(0.4), ConstantRate(0.5)]), **kwargs)

    def testSymmetric(self):
        one = ProcessSpec('npp', rate=ConstantRate(1))
        spec = ProcessSpec('skellam', plus=one, minus=one)
        x = _final_values(lambda rng: simulate_skellam(spec, 1., rng), 10000, 12)
        self.assertLess(abs(x.mean()), 4 * np.sqrt(2. / len(x)))
        self.assertTrue((x < 0).any() and (x > 0).any())

    def testMeanAndExponential(self):
        spec = self._spec()
        paths = [simulate(spec, 1., RngStream(13, i)) for i in range(20000)]
        x = values_at(paths, [1.])[:, 0]
        m, se = _mean_se(x)
        self.assertLess(abs(m - ((0.6 - 0.4) + 2 * (0.3 - 0.5))), 4 * se)
        comp = Compensator(spec)
        self.assertAlmostEqual(comp.mean(paths[0], 1.), -0.2)
        for u in [0.4, -0.4]:
            m, se = _mean_se(np.exp(u * x - comp.exponents(paths, u, [1.])[:, 0]))
            self.assertLess(abs(m - 1), 4 * se)

    def testClocks(self):
        clock = SubordinatorSpec('inverse_stable', 0.01, alpha=0.7)
        shared = simulate(self._spec(time_change=clock), 1., RngStream(14))
        self.assertIsNotNone(shared.clock)
        self.assertIsNone(shared.minus_clock)
        split = simulate(self._spec(time_change=clock, shared_clock=False), 1., RngStream(14))
        self.assertIsNotNone(split.minus_clock)
        self.assertFalse(np.array_equal(split.clock.values, split.minus_clock.values))


class CompensatorTest(unittest.TestCase):
    def testDeterministic(self):
        spec = ProcessSpec('ngcp', rates=[PowerLawRate(1, 2), ConstantRate(0.5)])
        p = simulate(spec, 2., RngStream(15))
        comp = Compensator(spec)
        self.assertAlmostEqual(comp.mean(p, 1.5), 1.5 ** 2 + 2 * 0.5 * 1.5)
        u = 0.7
        self.assertAlmostEqual(comp.exponent(p, u, 1.), np.expm1(u) + np.expm1(2 * u) * 0.5)
        self.assertEqual(comp.exponent(p, 0, 1.), 0)

    def testAlongClock(self):
        spec = ProcessSpec('npp', rate=ConstantRate(2.),
                           time_change=SubordinatorSpec('inverse_stable', 0.01, alpha=0.5))
        p = simulate(spec, 1., RngStream(16))
        t = np.array([0., 0.333, 1.])
        self.assertTrue(np.allclose(Compensator(spec).mean(p, t), 2. * p.clock.value_at(t)))


class ProcessSpecTest(unittest.TestCase):
    def testConfig(self):
        cfg = {'kind': 'skellam', 'shared_clock': False,
               'plus': {'kind': 'npp', 'rate': {'type': 'constant', 'lambda': 1.0}},
               'minus': {'kind': 'ngcp', 'rates': [{'type': 'power', 'c': 1.0, 'p': 2.0}]},
               'time_change': {'kind': 'inverse_mixed', 'alpha1': 0.4, 'alpha2': 0.8, 'c1': 0.5, 'c2': 0.5,
                               'grid_step': 0.01}}
        spec = ProcessSpec.from_config(cfg)
        self.assertEqual(spec.to_config(), cfg)
        self.assertEqual(spec.family, 'NMFSP')
        self.assertEqual(spec.base().family, 'NGSP')

    def testFieldPath(self):
        cfg = {'kind': 'ngcp', 'rates': [{'type': 'constant', 'lambda': 1.0}, {'type': 'constant', 'lambda': -1}]}
        with self.assertRaises(DomainError) as ctx:
            ProcessSpec.from_config(cfg)
        self.assertEqual(ctx.exception.param, 'rates[1].lambda')
        cfg = {'kind': 'npp', 'rate': {'type': 'constant', 'lambda': 1.0},
               'time_change': {'kind': 'inverse_stable', 'alpha': 1.5}}
        with self.assertRaises(DomainError) as ctx:
            ProcessSpec.from_config(cfg)
        self.assertEqual(ctx.exception.param, 'time_change.alpha')

    def testFamilies(self):
        rate = ConstantRate(1)
        self.assertEqual(ProcessSpec('npp', rate=rate).family, 'NPP')
        self.assertEqual(ProcessSpec('ngcp', rates=[rate, rate], time_change=SubordinatorSpec(
            'tempered_of_inverse_stable', alpha=0.8, beta=0.6, theta=2)).family, 'NTGSTFCP')
        self.assertEqual(ProcessSpec('npp', rate=rate, time_change=SubordinatorSpec(
            'inverse_stable', alpha=0.7)).family, 'NTFPP')
        one = ProcessSpec('npp', rate=rate)
        self.assertEqual(ProcessSpec('skellam', plus=one, minus=one, time_change=SubordinatorSpec(
            'inverse_stable', alpha=0.7)).family, 'NFSP')

    def testInvalid(self):
        rate = ConstantRate(1)
        with self.assertRaises(DomainError):
            ProcessSpec('ngcp', rates=[])
        with self.assertRaises(DomainError):
            ProcessSpec('npp', rate=rate, construction='marked')
        inner = ProcessSpec('npp', rate=rate, time_change=SubordinatorSpec('inverse_stable', alpha=0.5))
        with self.assertRaises(DomainError):
            ProcessSpec('skellam', plus=inner, minus=ProcessSpec('npp', rate=rate))


if __name__ == '__main__':
    unittest.main()
