# -*- coding: utf-8 -*-
# File: table.py

import numpy as np

from ..errors import DomainError
from ..processes import values_at

__all__ = ['PathTable', 'table_means', 'table_exponents']


class PathTable(object):
    """
    Functionals of many paths evaluated at a fixed set of times: the values,
    and optionally the compensator, the exponential-martingale exponents and the clock.
    Rows follow path-index order, columns follow ``times``.

    A table stands in for a list of :class:`CountingPath` in every check, so
    workers can ship a few numbers per path instead of whole trajectories.
    """

    def __init__(self, times, values, means=None, exponents=None, clocks=None):
        self.times = np.asarray(times, dtype='float64')
        self.values = np.asarray(values, dtype='int64').reshape(-1, len(self.times))
        self._means = means
        self._exponents = dict(exponents or {})
        self._clocks = clocks
        self._index = {float(t): k for k, t in enumerate(self.times)}

    @staticmethod
    def from_paths(paths, times, compensator=None, u_values=()):
        """
        Args:
            paths (list[CountingPath]):
            times (list[float]):
            compensator (Compensator): if given, also tabulate means and exponents at ``u_values``.
        """
        times = np.asarray(sorted(set(float(t) for t in times)), dtype='float64')
        means, exponents = None, {}
        if compensator is not None:
            means = compensator.means(paths, times)
            exponents = {float(u): compensator.exponents(paths, u, times) for u in u_values}
        clocks = np.array([p.clock_at(times) for p in paths], dtype='float64').reshape(len(paths), len(times))
        return PathTable(times, values_at(paths, times), means, exponents, clocks)

    @staticmethod
    def concat(tables):
        """ Stack tables over the same times, keeping their order. """
        first = tables[0]
        for t in tables[1:]:
            if not np.array_equal(t.times, first.times):
                raise DomainError("Cannot stack tables over different times")

        def stack(get):
            parts = [get(t) for t in tables]
            return None if parts[0] is None else np.concatenate(parts)
        exponents = {u: np.concatenate([t._exponents[u] for t in tables]) for u in first._exponents}
        return PathTable(first.times, stack(lambda t: t.values), stack(lambda t: t._means),
                         exponents, stack(lambda t: t._clocks))

    def __len__(self):
        return len(self.values)

    def _columns(self, times):
        try:
            return [self._index[float(t)] for t in np.atleast_1d(times)]
        except KeyError as e:
            raise DomainError("Time {} was not tabulated; have {}".format(e.args[0], list(self.times)))

    def values_at(self, times):
        return self.values[:, self._columns(times)]

    def clock_at(self, times):
        if self._clocks is None:
            raise DomainError("The clock was not tabulated")
        return self._clocks[:, self._columns(times)]

    def means_at(self, times):
        if self._means is None:
            raise DomainError("The compensator was not tabulated")
        return self._means[:, self._columns(times)]

    def exponents_at(self, u, times):
        if float(u) not in self._exponents:
            raise DomainError("Exponent u={} was not tabulated".format(u))
        return self._exponents[float(u)][:, self._columns(times)]

    def __repr__(self):
        return "PathTable(n_paths={}, times={})".format(len(self), list(self.times))


def table_means(table, times):
    """ The compensator of a :class:`PathTable`, with the signature checks expect. """
    return table.means_at(times)


def table_exponents(table, u, times):
    """ The exponential-martingale exponents of a :class:`PathTable`, with the signature checks expect. """
    return table.exponents_at(u, times)
