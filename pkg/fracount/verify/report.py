# -*- coding: utf-8 -*-
# File: report.py

import csv
import os
import shutil
import numpy as np
from scipy.stats import norm
from tabulate import tabulate
from termcolor import colored

from ..errors import DomainError

__all__ = ['CheckReport', 'holm_adjust', 'threshold_for_level', 'write_report_csv',
           'summary_table', 'REPORT_COLUMNS', 'DEFAULT_THRESHOLD']

DEFAULT_THRESHOLD = 4.0
"""
Default z threshold of a single check, before any multiple-testing adjustment.
"""

REPORT_COLUMNS = ['scenario', 'check_name', 'u_or_v', 's', 't', 'statistic', 'std_error', 'target',
                  'z', 'adjusted_threshold', 'pass', 'n_paths', 'notes']


def threshold_for_level(level):
    """
    The two-sided z threshold of significance ``level``.
    """
    level = float(level)
    if not 0 < level < 1:
        raise DomainError("significance level must lie in (0, 1), got {}".format(level), param='significance')
    return float(norm.isf(level / 2))


class CheckReport(object):
    """
    The immutable outcome of one statistical check.

    A ``'z'`` report passes when :math:`|statistic - target| \\le threshold \\cdot std\\_error + allowance`.
    A ``'chi2'`` report carries its own p-value and passes when it is at least the
    two-sided level of ``threshold``. For both kinds this is ``p_value >= 2 * norm.sf(threshold)``.

    Attributes:
        name (str):
        statistic (float):
        std_error (float): >= 0.
        target (float):
        n_samples (int):
        notes (str):
        allowance (float): extra half-width of the acceptance band, e.g. a grid-bias estimate.
        threshold (float): z threshold the report was judged with.
        kind (str): ``'z'`` or ``'chi2'``.
        u_or_v, s, t: probe coordinates, or None.
    """

    def __init__(self, name, statistic, std_error, target, n_samples, notes='',
                 allowance=0., threshold=DEFAULT_THRESHOLD, kind='z', p_value=None,
                 u_or_v=None, s=None, t=None):
        if kind not in ('z', 'chi2'):
            raise DomainError("Unknown report kind '{}'".format(kind), param='kind')
        if std_error < 0 or allowance < 0:
            raise DomainError("std_error and allowance must be >= 0, got {} and {}".format(std_error, allowance))
        self.name = name
        self.statistic = float(statistic)
        self.std_error = float(std_error)
        self.target = float(target)
        self.n_samples = int(n_samples)
        self.notes = notes
        self.allowance = float(allowance)
        self.threshold = float(threshold)
        self.kind = kind
        self.u_or_v = u_or_v
        self.s = s
        self.t = t
        if kind == 'z':
            p_value = self._z_p_value()
        elif p_value is None:
            raise DomainError("A chi2 report needs a p-value", param='p_value')
        self.p_value = float(p_value)

    def _excess(self):
        return max(0., abs(self.statistic - self.target) - self.allowance)

    def _z_p_value(self):
        if not np.isfinite(self.statistic):
            return 0.
        excess = self._excess()
        if self.std_error == 0:
            return 1. if excess == 0 else 0.
        return float(2 * norm.sf(excess / self.std_error))

    @property
    def z_score(self):
        """ :math:`(statistic - target) / std\\_error`; 0 or infinite when the standard error is 0. """
        diff = self.statistic - self.target
        if self.std_error > 0:
            return diff / self.std_error
        if diff == 0:
            return 0.
        return float(np.copysign(np.inf, diff))

    @property
    def passed(self):
        if not np.isfinite(self.statistic):
            return False
        if self.kind == 'z':
            return self._excess() <= self.threshold * self.std_error
        return self.p_value >= 2 * norm.sf(self.threshold)

    def with_threshold(self, threshold):
        """
        Returns:
            CheckReport: a copy judged with another threshold.
        """
        return CheckReport(self.name, self.statistic, self.std_error, self.target, self.n_samples,
                           notes=self.notes, allowance=self.allowance, threshold=threshold, kind=self.kind,
                           p_value=self.p_value, u_or_v=self.u_or_v, s=self.s, t=self.t)

    def label(self):
        """ e.g. ``exponential_martingale[u=0.5,t=1]``. """
        coords = ['{}={}'.format(k, v) for k, v in [('u/v', self.u_or_v), ('s', self.s), ('t', self.t)]
                  if v is not None]
        return '{}[{}]'.format(self.name, ','.join(coords)) if coords else self.name

    def as_row(self, scenario):
        """
        Returns:
            dict: one row of ``report.csv``, keyed by :data:`REPORT_COLUMNS`.
        """
        return {
            'scenario': scenario,
            'check_name': self.name,
            'u_or_v': _fmt(self.u_or_v),
            's': _fmt(self.s),
            't': _fmt(self.t),
            'statistic': repr(self.statistic),
            'std_error': repr(self.std_error),
            'target': repr(self.target),
            'z': repr(self.z_score),
            'adjusted_threshold': repr(self.threshold),
            'pass': 'true' if self.passed else 'false',
            'n_paths': self.n_samples,
            'notes': self.notes,
        }

    def __repr__(self):
        return "CheckReport({}, statistic={:.6g}, target={:.6g}, se={:.3g}, {})".format(
            self.label(), self.statistic, self.target, self.std_error, 'PASS' if self.passed else 'FAIL')


def _fmt(x):
    if x is None:
        return ''
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def holm_adjust(reports, level=0.01, min_threshold=None):
    """
    Holm's step-down adjustment over one family of reports.

    Reports are ranked by p-value. The report of rank ``i`` (0-based) out of ``m``
    is tested at ``level / (m - i)``, i.e. with z threshold ``norm.isf(level / (2 (m - i)))``;
    once one report is not rejected, every later one passes.

    Args:
        reports (list[CheckReport]):
        level (float): family-wise significance level.
        min_threshold (float): optional lower bound of every adjusted z threshold.

    Returns:
        list[CheckReport]: adjusted copies, in the input order.
    """
    m = len(reports)
    if m == 0:
        return []
    threshold_for_level(level)
    order = sorted(range(m), key=lambda i: (reports[i].p_value, i))
    ret = [None] * m
    accepted_at = None
    for rank, i in enumerate(order):
        if accepted_at is not None:
            # later reports have larger p-values, so they pass at the first accepting threshold
            ret[i] = reports[i].with_threshold(accepted_at)
            continue
        thr = float(norm.isf(level / (2. * (m - rank))))
        if min_threshold is not None:
            thr = max(thr, float(min_threshold))
        ret[i] = reports[i].with_threshold(thr)
        if ret[i].passed:
            accepted_at = thr
    return ret


def write_report_csv(fname, scenario, reports):
    """
    Write ``report.csv`` atomically, one row per report in the given order.
    """
    tmp = fname + '.tmp'
    with open(tmp, 'w', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=REPORT_COLUMNS, lineterminator='\n')
        writer.writeheader()
        for r in reports:
            writer.writerow(r.as_row(scenario))
    shutil.move(tmp, fname)
    return os.path.abspath(fname)


def summary_table(reports):
    """
    Returns:
        str: a table with one line per report, PASS/FAIL colored.
    """
    data = []
    for r in reports:
        verdict = colored('PASS', 'green') if r.passed else colored('FAIL', 'red', attrs=['bold'])
        data.append([r.label(), r.statistic, r.target, r.std_error, r.z_score, r.threshold, verdict])
    return tabulate(data, headers=['check', 'statistic', 'target', 'std_error', 'z', 'threshold', ''],
                    floatfmt='.5g')
