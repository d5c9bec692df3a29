# -*- coding: utf-8 -*-
# File: sampling.py

"""
Elementary random variates, all drawn from a :class:`RngStream`.

Every generator takes an optional numpy-style ``size``: with ``size=None``
a python scalar is returned, otherwise an array of that shape.
"""

import numpy as np

from .errors import ConfigurationError, DomainError

__all__ = ['RngStream', 'poisson', 'exponential', 'one_sided_stable',
           'tempered_stable_increment', 'tempered_acceptance', 'MIN_TEMPERED_ACCEPTANCE',
           'POISSON_NORMAL_CUTOFF']

_UINT64_MAX = 2 ** 64 - 1

MIN_TEMPERED_ACCEPTANCE = 1e-6
"""
Smallest expected acceptance probability :math:`e^{-dt\\theta^\\beta}` of the tempered rejection sampler.
"""

POISSON_NORMAL_CUTOFF = 1e15


def _check_uint64(value, name):
    if isinstance(value, bool) or int(value) != value or not 0 <= int(value) <= _UINT64_MAX:
        raise DomainError("{} must be an unsigned 64-bit integer, got {}".format(name, value))
    return int(value)


class RngStream(object):
    """
    A deterministic random stream identified by ``(seed, stream_index)``.

    It wraps a numpy ``Generator`` on PCG64, seeded by a ``SeedSequence``
    whose spawn key starts with ``stream_index``. Equal identifiers yield
    bit-identical variates on every platform, and distinct indices give
    statistically independent streams.

    A stream is an owned mutable object. Hand each worker its own stream,
    derived by index, instead of sharing one.
    """

    def __init__(self, seed, stream_index=0, _subkey=()):
        """
        Args:
            seed (int): unsigned 64-bit seed, usually the scenario seed.
            stream_index (int): unsigned 64-bit index, usually the path index.
        """
        self.seed = _check_uint64(seed, 'seed')
        self.stream_index = _check_uint64(stream_index, 'stream_index')
        self._subkey = tuple(_subkey)
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream_index,) + self._subkey)
        self._gen = np.random.Generator(np.random.PCG64(seq))

    def child(self, i):
        """
        Derive the i-th independent sub-stream.

        The child depends only on ``(seed, stream_index, i)`` and the chain of
        ancestors, never on how much of the parent has been consumed.

        Returns:
            RngStream
        """
        return RngStream(self.seed, self.stream_index, self._subkey + (_check_uint64(i, 'i'),))

    @property
    def generator(self):
        """ The underlying ``numpy.random.Generator``. """
        return self._gen

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._gen.uniform(low, high, size)

    def __repr__(self):
        return "RngStream(seed={}, stream_index={}, subkey={})".format(
            self.seed, self.stream_index, self._subkey)


def _scalar_or_array(arr, size):
    if size is None:
        return arr.item()
    return arr


def poisson(mean, rng, size=None):
    """
    Draw from Poisson(mean). A zero mean returns 0 without consuming randomness.
    Means above :data:`POISSON_NORMAL_CUTOFF` are drawn as a rounded normal variate,
    which is indistinguishable from Poisson at double precision, and counts saturate at 2^53.

    Args:
        mean (float or np.ndarray): nonnegative finite mean(s). An array is broadcast against ``size``.
        rng (RngStream):
        size: output shape.

    Returns:
        int or np.ndarray of int64
    """
    mean_arr = np.asarray(mean, dtype='float64')
    if np.any(~np.isfinite(mean_arr)) or np.any(mean_arr < 0):
        raise DomainError("Poisson mean must be finite and >= 0, got {}".format(mean), param="mean")
    if mean_arr.ndim == 0 and mean_arr == 0:
        return _scalar_or_array(np.zeros(() if size is None else size, dtype="int64"), size)
    huge = mean_arr > POISSON_NORMAL_CUTOFF
    if np.any(huge):
        lam = np.where(huge, 0., mean_arr)
        approx = np.minimum(np.rint(rng.generator.normal(mean_arr, np.sqrt(mean_arr), size)), 2. ** 53)
        ret = np.where(huge, approx, rng.generator.poisson(lam, size)).astype("int64")
    else:
        ret = np.asarray(rng.generator.poisson(mean_arr, size), dtype="int64")
    if size is None and mean_arr.ndim:
        return ret
    return _scalar_or_array(ret, size)


def exponential(rate, rng, size=None):
    """
    Draw from Exp(rate) by inversion, ``-log(1-U)/rate``, so the output is
    monotone in the underlying uniform.
    """
    rate = float(rate)
    if not np.isfinite(rate) or rate <= 0:
        raise DomainError("Exponential rate must be finite and > 0, got {}".format(rate), param="rate")
    u = np.asarray(rng.generator.random(size))
    ret = -np.log1p(-u) / rate
    return _scalar_or_array(ret, size)


def _check_index(alpha, name='alpha'):
    alpha = float(alpha)
    if not 0 < alpha < 1:
        raise DomainError("{} must lie in (0, 1), got {}".format(name, alpha), param=name)
    return alpha


def _stable_kernel(alpha, rng, size):
    # Kanter's form of the Chambers-Mallows-Stuck transformation for a totally skewed,
    # positive stable law with Laplace transform exp(-s^alpha).
    tiny = np.finfo('float64').tiny
    u = rng.generator.uniform(tiny, np.pi, size)
    e = np.maximum(rng.generator.standard_exponential(size), tiny)
    a = np.sin(alpha * u) / np.sin(u) ** (1.0 / alpha)
    b = (np.sin((1.0 - alpha) * u) / e) ** ((1.0 - alpha) / alpha)
    return np.asarray(a * b)


def one_sided_stable(alpha, rng, size=None):
    """
    Draw a strictly positive stable variate S with :math:`E[e^{-sS}] = e^{-s^\\alpha}`.
    For alpha=1/2 it is distributed as :math:`1/(2Z^2)`.

    Args:
        alpha (float): stability index in (0, 1).
        rng (RngStream):
        size: output shape.
    """
    alpha = _check_index(alpha)
    return _scalar_or_array(_stable_kernel(alpha, rng, size), size)


def tempered_acceptance(beta, theta, dt):
    """
    Returns:
        float: the acceptance probability :math:`e^{-dt\\theta^\\beta}` of one tempered proposal.
    """
    return float(np.exp(-dt * theta ** beta))


def tempered_stable_increment(beta, theta, dt, rng, size=None, counter=None):
    """
    Draw the increment :math:`D_{\\beta,\\theta}(dt)` of a tempered stable subordinator.

    A proposal :math:`X = dt^{1/\\beta} S`, with S from :func:`one_sided_stable`, is
    accepted with probability :math:`e^{-\\theta X}`.

    Args:
        beta (float): stability index in (0, 1).
        theta (float): tempering parameter > 0.
        dt (float or np.ndarray): time increment(s) > 0. An array gives one draw per element.
        rng (RngStream):
        size: output shape.
        counter (RatioCounter): if given, is fed with (accepted, proposed) counts.

    Raises:
        ConfigurationError: when the acceptance probability is below :data:`MIN_TEMPERED_ACCEPTANCE`.
    """
    beta = _check_index(beta, 'beta')
    theta = float(theta)
    if not np.isfinite(theta) or theta <= 0:
        raise DomainError("theta must be finite and > 0, got {}".format(theta), param="theta")
    dt_arr = np.asarray(dt, dtype='float64')
    if np.any(~np.isfinite(dt_arr)) or np.any(dt_arr <= 0):
        raise DomainError("dt must be finite and > 0, got {}".format(dt), param="dt")
    if dt_arr.size == 0:
        return np.empty(dt_arr.shape)
    acc = tempered_acceptance(beta, theta, dt_arr.max())
    if acc < MIN_TEMPERED_ACCEPTANCE:
        raise ConfigurationError(
            "Tempered acceptance probability {:.3g} is below {:g}: use a step dt <= {:.4g}".format(
                acc, MIN_TEMPERED_ACCEPTANCE, -np.log(MIN_TEMPERED_ACCEPTANCE) / theta ** beta))

    if dt_arr.ndim:
        if size is not None and tuple(np.atleast_1d(size)) != dt_arr.shape:
            raise DomainError("size {} does not match the shape of dt {}".format(size, dt_arr.shape), param="size")
        shape = dt_arr.shape
    else:
        shape = () if size is None else size
    # proposal scale per output element
    scale = np.broadcast_to(dt_arr ** (1.0 / beta), shape).ravel()
    n = len(scale)
    out = np.empty(n, dtype='float64')
    pending = np.arange(n)
    while len(pending):
        need = len(pending)
        x = scale[pending] * _stable_kernel(beta, rng, need)
        ok = rng.generator.random(need) < np.exp(-theta * x)
        out[pending[ok]] = x[ok]
        pending = pending[~ok]
        if counter is not None:
            counter.feed(int(ok.sum()), need)
    if size is None and not dt_arr.ndim:
        return float(out[0])
    return out.reshape(shape)
