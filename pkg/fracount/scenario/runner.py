# -*- coding: utf-8 -*-
# File: runner.py

import csv
import os
import shutil
import numpy as np

from ..errors import ConfigurationError, DomainError, UnsupportedError
from ..processes import Compensator, ProcessSpec, simulate
from ..rates import ConstantRate
from ..sampling import RngStream
from ..subordinators import SubordinatorSpec
from ..utils import logger
from ..utils.concurrency import available_parallelism, ordered_map
from ..utils.timer import timed_operation
from ..utils.utils import get_tqdm
from ..verify.checks import (
    check_compensated_martingale, check_distribution_equality, check_exponential_martingale,
    check_increment_correlation, check_moments, check_pgf_space_fractional, check_poisson_fit,
    check_transform, grid_bias_allowance)
from ..verify.oracles import (
    oracle_clock_moments, oracle_ngcp_moments, oracle_subordinator_laplace, oracle_time_changed_moments)
from ..verify.report import CheckReport, holm_adjust, summary_table, write_report_csv
from ..verify.table import PathTable, table_exponents, table_means

__all__ = ['run_scenario', 'validate_scenario', 'simulate_tables', 'write_paths_csv', 'CHUNK_PATHS']

CHUNK_PATHS = 1000
"""
Largest number of paths one worker simulates per task.
"""

# the comparison process of distribution_equality draws from this child of the path stream
AGAINST_STREAM = 2

UI_NOTE = 'uniform integrability assumed, not tested'
GRID_BIAS_NOTE = 'grid-bias allowance from a half-step rerun'


def _clock(spec):
    return spec.time_change if spec.is_time_changed else SubordinatorSpec('identity')


def _moment_oracle(spec, of, t):
    clock_moments = oracle_clock_moments(_clock(spec), t)
    if of == 'clock':
        return clock_moments
    if spec.is_skellam:
        raise UnsupportedError("Process moments are not available for a Skellam process")
    if not spec.is_time_changed:
        return oracle_ngcp_moments(spec.rates, t)
    return oracle_time_changed_moments(spec.rates, clock_moments)


def _poisson_rate(spec):
    if spec.is_time_changed or spec.is_skellam or len(spec.rates) != 1:
        raise UnsupportedError("poisson_fit needs an npp without time change, got {}".format(spec.family))
    return spec.rates[0]


def _half_step(spec):
    cfg = spec.to_config()
    cfg['time_change']['grid_step'] = spec.time_change.grid_step / 2.
    return ProcessSpec.from_config(cfg)


def _variant(spec, clock):
    cfg = spec.base().to_config()
    cfg['time_change'] = clock.to_config()
    return ProcessSpec.from_config(cfg)


def _check_thinnable(spec, horizon, field):
    if spec.construction != 'marked':
        return
    for j, r in enumerate(spec.rates):
        try:
            r.upper_bound(0, horizon)
        except DomainError as e:
            raise ConfigurationError(str(e), field='{}.rates[{}]'.format(field, j))


def validate_scenario(scenario):
    """
    Check that every configured check is defined for the scenario's process.

    Raises:
        ConfigurationError: naming the offending check, e.g. ``checks[2]``.
    """
    spec = scenario.process
    _check_thinnable(spec, scenario.horizon, 'process')
    for i, check in enumerate(scenario.checks):
        field = 'checks[{}]'.format(i)
        name = check['name']
        try:
            if name == 'laplace':
                if not spec.is_time_changed:
                    raise UnsupportedError("laplace needs a time-changed process")
                oracle_subordinator_laplace(spec.time_change, 1., 1.)
            elif name == 'moments':
                _moment_oracle(spec, check['of'], check['t'])
                if check['grid_bias'] and not spec.is_time_changed:
                    raise UnsupportedError("grid_bias needs a time-changed process")
            elif name == 'poisson_fit':
                _poisson_rate(spec)
            elif name == 'pgf':
                tc = spec.time_change
                if spec.kind != 'npp' or tc is None or tc.kind != 'stable' \
                        or not isinstance(spec.rates[0], ConstantRate):
                    raise UnsupportedError("pgf needs a constant-rate npp on a stable clock")
            elif name == 'distribution_equality':
                _check_thinnable(check['against'], scenario.horizon, field + '.against')
            elif name == 'degenerate_reduction':
                for clock in check['variants']:
                    _variant(spec, clock)
        except (UnsupportedError, DomainError) as e:
            raise ConfigurationError(str(e), field=field)


def _plan(scenario):
    """
    Everything a worker needs, as plain picklable data.
    """
    spec = scenario.process
    probes = scenario.probes
    times = {scenario.horizon}
    u_values = []
    compensator = False
    tables = {}
    variants = []
    half_times = set()
    for i, check in enumerate(scenario.checks):
        name = check['name']
        if name in ('exponential_martingale', 'compensated_martingale'):
            times.update(probes.times)
            compensator = True
            if name == 'exponential_martingale':
                u_values = probes.u_values
        for k in ['s', 't']:
            if k in check:
                times.add(check[k])
        times.update(check.get('t_values', []))
        times.update(check.get('times', []))
        if name == 'moments' and check['grid_bias']:
            half_times.add(check['t'])
        if name == 'distribution_equality':
            tables['against[{}]'.format(i)] = {
                'process': check['against'].to_config(), 'times': list(check['t_values']),
                'compensator': False, 'u_values': [], 'independent': True}
        if name == 'degenerate_reduction':
            variants.extend(_variant(spec, c).to_config() for c in check['variants'])
    tables['main'] = {'process': spec.to_config(), 'times': sorted(times), 'compensator': compensator,
                      'u_values': list(u_values), 'independent': False}
    if half_times:
        tables['half'] = {'process': _half_step(spec).to_config(), 'times': sorted(half_times),
                          'compensator': False, 'u_values': [], 'independent': False}
    return {'horizon': scenario.horizon, 'seed': scenario.seed, 'tables': tables,
            'base': spec.base().to_config(), 'variants': variants, 'dump': scenario.dump_paths}


def _simulate_chunk(job):
    """
    Simulate paths ``start, ..., stop - 1`` of a plan and reduce them to tables.
    Path ``i`` draws from ``RngStream(seed, i)`` only.
    """
    plan, start, stop = job
    horizon = plan['horizon']
    specs = [(k, ProcessSpec.from_config(v['process'])) for k, v in sorted(plan['tables'].items())]
    base = ProcessSpec.from_config(plan['base'])
    variants = [ProcessSpec.from_config(c) for c in plan['variants']]
    paths = {k: [] for k, _ in specs}
    same = [0] * len(variants)
    jumps = []
    for i in range(start, stop):
        rng = RngStream(plan['seed'], i)
        for k, spec in specs:
            stream = rng.child(AGAINST_STREAM) if plan['tables'][k]['independent'] else rng
            paths[k].append(simulate(spec, horizon, stream))
        if variants:
            ref = simulate(base, horizon, rng)
            for j, v in enumerate(variants):
                same[j] += int(simulate(v, horizon, rng).same_jumps(ref))
        if plan['dump']:
            p = paths['main'][-1]
            jumps.append((i, p.jump_times, p.jump_sizes))
    tables = {}
    for k, spec in specs:
        entry = plan['tables'][k]
        comp = Compensator(spec) if entry['compensator'] else None
        tables[k] = PathTable.from_paths(paths[k], entry['times'], comp, entry['u_values'])
    return {'tables': tables, 'same': same, 'jumps': jumps}


def _chunks(n_paths, threads):
    size = max(1, min(CHUNK_PATHS, -(-n_paths // threads)))
    return [(start, min(start + size, n_paths)) for start in range(0, n_paths, size)]


def simulate_tables(scenario, threads=1, progress=False):
    """
    Simulate all paths of a scenario with ``threads`` worker processes.

    Returns:
        (dict, list[int], list): tables keyed ``'main'``, ``'half'`` and ``'against[i]'``;
        per degenerate variant, the number of paths identical to the base;
        and ``(path_id, jump_times, jump_sizes)`` per path when ``dump_paths`` is set.
        All three are in path-index order and do not depend on ``threads``.
    """
    plan = _plan(scenario)
    jobs = [(plan, a, b) for a, b in _chunks(scenario.n_paths, threads)]
    parts = {k: [] for k in plan['tables']}
    same = np.zeros(len(plan['variants']), dtype='int64')
    jumps = []
    with get_tqdm(total=len(jobs), desc=scenario.name, unit='chunk', disable=not progress) as pbar:
        for res in ordered_map(_simulate_chunk, jobs, threads, progress=pbar):
            for k, table in res['tables'].items():
                parts[k].append(table)
            same += np.asarray(res['same'], dtype='int64')
            jumps.extend(res['jumps'])
    tables = {k: PathTable.concat(v) for k, v in parts.items()}
    return tables, [int(x) for x in same], jumps


def _column(table, of, t):
    if of == 'clock':
        return table.clock_at([t])[:, 0]
    return table.values_at([t])[:, 0]


def _sample_moments(x):
    x = np.asarray(x, dtype='float64')
    return x.mean(), x.var(ddof=1)


def _run_checks(scenario, tables, same):
    spec = scenario.process
    main = tables['main']
    thr = scenario.z_threshold
    level = scenario.significance
    mart_notes = UI_NOTE if spec.is_time_changed else ''
    reports = []
    n_variants = 0
    for i, check in enumerate(scenario.checks):
        name = check['name']
        if name == 'exponential_martingale':
            reports.extend(check_exponential_martingale(main, table_exponents, scenario.probes, thr, mart_notes))
        elif name == 'compensated_martingale':
            reports.extend(check_compensated_martingale(main, table_means, scenario.probes, thr, mart_notes))
        elif name == 'moments':
            t, of = check['t'], check['of']
            x = _column(main, of, t)
            mean, var = _moment_oracle(spec, of, t)
            allowance, notes = (0., 0.), ''
            if check['grid_bias']:
                coarse, fine = _sample_moments(x), _sample_moments(_column(tables['half'], of, t))
                allowance = (grid_bias_allowance(coarse[0], fine[0]), grid_bias_allowance(coarse[1], fine[1]))
                notes = GRID_BIAS_NOTE
            reports.extend(check_moments(x, mean, var, allowance, thr, name='moments/' + of, t=t, notes=notes))
        elif name == 'laplace':
            for t in check['t_values']:
                clock = main.clock_at([t])[:, 0]
                for s in check['s_values']:
                    target = oracle_subordinator_laplace(spec.time_change, s, t)
                    reports.append(check_transform(np.exp(-s * clock), target, 'laplace', threshold=thr,
                                                   u_or_v=s, t=t))
        elif name == 'poisson_fit':
            s, t = check['s'], check['t']
            v = main.values_at([s, t])
            mean = _poisson_rate(spec).cumulative_between(s, t)
            reports.append(check_poisson_fit(v[:, 1] - v[:, 0], mean, level, s=s, t=t))
        elif name == 'increment_correlation':
            a, b, c = check['times']
            v = main.values_at([a, b, c])
            reports.append(check_increment_correlation(v[:, 1] - v[:, 0], v[:, 2] - v[:, 1], thr, s=b, t=c))
        elif name == 'distribution_equality':
            against = tables['against[{}]'.format(i)]
            notes = 'against ' + check['against'].family
            for t in check['t_values']:
                reports.append(check_distribution_equality(main.values_at([t])[:, 0], against.values_at([t])[:, 0],
                                                           level, t=t, notes=notes))
        elif name == 'pgf':
            reports.extend(check_pgf_space_fractional(main, spec.rates[0], spec.time_change.alpha,
                                                      check['v_values'], check['t'], thr))
        elif name == 'mean':
            reports.append(check_transform(main.values_at([check['t']])[:, 0], check['target'], 'mean',
                                           threshold=thr, t=check['t']))
        elif name == 'degenerate_reduction':
            for clock in check['variants']:
                n = len(main)
                reports.append(CheckReport('degenerate_reduction/' + clock.kind, same[n_variants] / float(n),
                                           0., 1., n, notes='bit-identity to the base under ' + repr(clock)))
                n_variants += 1
        else:
            raise ConfigurationError("unknown check '{}'".format(name), field='checks[{}].name'.format(i))
    return reports


def write_paths_csv(fname, jumps):
    """
    Write ``paths.csv`` atomically with columns ``path_id, jump_time, jump_size``, one row per jump.
    """
    tmp = fname + '.tmp'
    with open(tmp, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(['path_id', 'jump_time', 'jump_size'])
        for path_id, times, sizes in jumps:
            for t, j in zip(times, sizes):
                writer.writerow([path_id, repr(float(t)), int(j)])
    shutil.move(tmp, fname)
    return os.path.abspath(fname)


def run_scenario(scenario, progress=True):
    """
    Simulate a scenario, run its checks with a Holm adjustment at its significance level,
    and write ``report.csv`` (and ``paths.csv`` when ``dump_paths`` is set) into
    ``<output_dir>/<name>``.

    Returns:
        list[CheckReport]: the adjusted reports in configuration order.

    Raises:
        ConfigurationError: when a check is not defined for the process.
        FracountError: from simulation or checking.
    """
    validate_scenario(scenario)
    threads = scenario.threads or available_parallelism()
    out = scenario.report_dir
    logger.set_logger_dir(out, action='k')
    try:
        logger.info("Scenario {} ({}): seed={}, n_paths={}, horizon={}, threads={}".format(
            scenario.name, scenario.process.family, scenario.seed, scenario.n_paths, scenario.horizon, threads))
        with timed_operation('simulating {} paths'.format(scenario.n_paths)):
            tables, same, jumps = simulate_tables(scenario, threads, progress)
        with timed_operation('checking'):
            reports = _run_checks(scenario, tables, same)
        reports = holm_adjust(reports, scenario.significance, min_threshold=scenario.z_threshold)
        fname = write_report_csv(os.path.join(out, 'report.csv'), scenario.name, reports)
        logger.info("Report written to {}".format(fname))
        if scenario.dump_paths:
            fname = write_paths_csv(os.path.join(out, 'paths.csv'), jumps)
            logger.info("Paths written to {}".format(fname))
        logger.info("Results of {}:\n".format(scenario.name) + summary_table(reports))
        n_failed = sum(1 for r in reports if not r.passed)
        if n_failed:
            logger.error("{} of {} checks failed.".format(n_failed, len(reports)))
        else:
            logger.info("All {} checks passed.".format(len(reports)))
        return reports
    finally:
        logger.unset_logger_dir()
