# -*- coding: utf-8 -*-
# File: stats.py

import numpy as np

from ..errors import SizingError

__all__ = ['RatioCounter', 'batch_means']


class RatioCounter(object):
    """ A counter to count ratio of something. """

    def __init__(self):
        self.reset()

    def reset(self):
        self._tot = 0
        self._cnt = 0

    def feed(self, count, total=1):
        """
        Args:
            count(int): the count of some event of interest.
            total(int): the total number of events.
        """
        self._tot += total
        self._cnt += count

    @property
    def ratio(self):
        if self._tot == 0:
            return 0
        return self._cnt * 1.0 / self._tot

    @property
    def total(self):
        return self._tot

    @property
    def count(self):
        return self._cnt


def batch_means(values, n_batches=100):
    """
    Sample mean with a batch-means standard error.

    The samples are split (in order) into ``n_batches`` contiguous batches of
    nearly equal size; the standard error is the standard deviation of the
    batch means divided by ``sqrt(n_batches)``.

    Args:
        values (np.ndarray): 1D array of per-path contributions, in path-index order.
        n_batches (int):

    Returns:
        (float, float): the mean and its standard error.
        A constant input gives exactly ``(value, 0.0)``.
    """
    values = np.asarray(values, dtype='float64').ravel()
    if len(values) < n_batches:
        raise SizingError("Need at least {} samples for {} batches, got {}.".format(
            n_batches, n_batches, len(values)))
    if np.ptp(values) == 0:
        return float(values[0]), 0.0
    means = np.array([b.mean() for b in np.array_split(values, n_batches)])
    se = np.std(means, ddof=1) / np.sqrt(n_batches)
    return float(values.mean()), float(se)
