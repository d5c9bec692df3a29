# -*- coding: utf-8 -*-
# File: oracles.py

"""
Closed-form moments and transforms, used as targets by :mod:`fracount.verify.checks`.
Every oracle evaluated at ``t=0`` returns the value of the process at zero.
"""

import numpy as np
from scipy.special import gamma

from ..errors import DomainError, UnsupportedError
from ..rates import ConstantRate, RateFunction

__all__ = ['oracle_inverse_stable_moments', 'oracle_tss_moments', 'oracle_ngcp_mgf',
           'oracle_ngcp_moments', 'oracle_subordinator_laplace', 'oracle_skellam_exponent',
           'oracle_clock_moments', 'oracle_time_changed_moments', 'oracle_space_fractional_pgf']


def _check_t(t):
    t = float(t)
    if not np.isfinite(t) or t < 0:
        raise DomainError("t must be finite and >= 0, got {}".format(t), param='t')
    return t


def _check_alpha(alpha):
    alpha = float(alpha)
    if not 0 < alpha <= 1:
        raise DomainError("alpha must lie in (0, 1], got {}".format(alpha), param='alpha')
    return alpha


def _check_tempered(beta, theta):
    beta, theta = float(beta), float(theta)
    if not 0 < beta < 1:
        raise DomainError("beta must lie in (0, 1), got {}".format(beta), param='beta')
    if not np.isfinite(theta) or theta <= 0:
        raise DomainError("theta must be finite and > 0, got {}".format(theta), param='theta')
    return beta, theta


def oracle_inverse_stable_moments(alpha, t):
    """
    Mean and variance of the inverse stable subordinator :math:`Y_\\alpha(t)`:

    .. math::
        \\frac{t^\\alpha}{\\Gamma(\\alpha+1)}, \\quad
        \\left(\\frac{2}{\\Gamma(2\\alpha+1)} - \\frac{1}{\\Gamma(\\alpha+1)^2}\\right) t^{2\\alpha}

    Returns:
        (float, float)
    """
    alpha, t = _check_alpha(alpha), _check_t(t)
    if alpha == 1:
        return t, 0.
    mean = t ** alpha / gamma(alpha + 1)
    var = (2. / gamma(2 * alpha + 1) - 1. / gamma(alpha + 1) ** 2) * t ** (2 * alpha)
    return float(mean), float(var)


def oracle_tss_moments(beta, theta, t):
    """
    Mean :math:`\\beta\\theta^{\\beta-1}t` and variance :math:`\\beta(1-\\beta)\\theta^{\\beta-2}t`
    of the tempered stable subordinator.
    """
    beta, theta = _check_tempered(beta, theta)
    t = _check_t(t)
    return beta * theta ** (beta - 1) * t, beta * (1 - beta) * theta ** (beta - 2) * t


def _cumulatives(rates, t):
    return [float(r.cumulative(t)) for r in rates]


def oracle_ngcp_mgf(u, rates, t):
    """
    :math:`E[e^{uM(t)}] = \\exp(\\sum_j \\Lambda_j(t)(e^{uj}-1))` for an NGCP with
    rate ``j`` (1-based) driving jumps of size ``j``.
    """
    u, t = float(u), _check_t(t)
    if not np.isfinite(u):
        raise DomainError("u must be finite, got {}".format(u), param='u')
    return float(np.exp(sum(np.expm1(u * j) * x for j, x in enumerate(_cumulatives(rates, t), 1))))


def oracle_ngcp_moments(rates, t):
    """
    Returns:
        (float, float): mean :math:`\\sum_j j\\Lambda_j(t)` and variance :math:`\\sum_j j^2\\Lambda_j(t)`.
    """
    lam = _cumulatives(rates, _check_t(t))
    return (float(sum(j * x for j, x in enumerate(lam, 1))),
            float(sum(j * j * x for j, x in enumerate(lam, 1))))


def oracle_skellam_exponent(u, plus_rates, minus_rates, t):
    """
    Log-MGF of the difference of two independent NGCPs:
    :math:`\\sum_j (e^{uj}-1)\\Lambda_j(t) + (e^{-uj}-1)T_j(t)`.
    """
    u, t = float(u), _check_t(t)
    ret = sum(np.expm1(u * j) * x for j, x in enumerate(_cumulatives(plus_rates, t), 1))
    ret += sum(np.expm1(-u * j) * x for j, x in enumerate(_cumulatives(minus_rates, t), 1))
    return float(ret)


def oracle_subordinator_laplace(spec, s, t):
    """
    :math:`E[e^{-sX(t)}]` for a direct subordinator:

    * identity: :math:`e^{-st}`
    * stable: :math:`e^{-ts^\\alpha}`
    * mixed: :math:`e^{-t(c_1 s^{\\alpha_1} + c_2 s^{\\alpha_2})}`
    * tempered: :math:`e^{-t((s+\\theta)^\\beta - \\theta^\\beta)}`

    Args:
        spec (SubordinatorSpec):
        s (float): >= 0.
        t (float): >= 0.

    Raises:
        UnsupportedError: for inverse kinds and compositions, which have no elementary transform.
    """
    s, t = float(s), _check_t(t)
    if not np.isfinite(s) or s < 0:
        raise DomainError("s must be finite and >= 0, got {}".format(s), param='s')
    if spec.kind == 'identity':
        exponent = s
    elif spec.kind == 'stable':
        exponent = s ** spec.alpha
    elif spec.kind == 'mixed':
        exponent = spec.c1 * s ** spec.alpha1 + spec.c2 * s ** spec.alpha2
    elif spec.kind == 'tempered':
        exponent = (s + spec.theta) ** spec.beta - spec.theta ** spec.beta
    else:
        raise UnsupportedError("No closed-form Laplace transform for subordinator kind '{}'".format(spec.kind))
    return float(np.exp(-t * exponent))


def oracle_clock_moments(spec, t):
    """
    Mean and variance of a clock with finite moments. The composition
    :math:`D_{\\beta,\\theta}(Y_\\alpha(t))` is conditioned on :math:`Y_\\alpha(t)`:
    mean :math:`\\beta\\theta^{\\beta-1}E[Y]`, variance
    :math:`\\beta(1-\\beta)\\theta^{\\beta-2}E[Y] + (\\beta\\theta^{\\beta-1})^2 Var[Y]`.

    Raises:
        UnsupportedError: for stable and mixed clocks (no moments) and the inverse mixed clock.
    """
    t = _check_t(t)
    if spec.is_identity:
        return t, 0.
    if spec.kind == 'inverse_stable':
        return oracle_inverse_stable_moments(spec.alpha, t)
    if spec.kind == 'tempered':
        return oracle_tss_moments(spec.beta, spec.theta, t)
    if spec.kind == 'tempered_of_inverse_stable':
        ym, yv = oracle_inverse_stable_moments(spec.alpha, t)
        m, v = oracle_tss_moments(spec.beta, spec.theta, 1.)
        return m * ym, v * ym + m * m * yv
    raise UnsupportedError("No closed-form moments for clock kind '{}'".format(spec.kind))


def _levels(rates):
    if isinstance(rates, (RateFunction, float, int)):
        rates = [rates]
    ret = []
    for r in rates:
        if isinstance(r, RateFunction):
            if not isinstance(r, ConstantRate):
                raise UnsupportedError("Time-changed moments need constant rates, got {}".format(r))
            r = r.lam
        ret.append(float(r))
    return ret


def oracle_time_changed_moments(rates, clock_moments):
    """
    Mean and variance of a constant-rate NGCP run on an independent clock with
    mean :math:`\\mu` and variance :math:`\\sigma^2`:
    :math:`m\\mu` and :math:`q\\mu + m^2\\sigma^2`, with
    :math:`m = \\sum_j j\\lambda_j`, :math:`q = \\sum_j j^2\\lambda_j`.
    A single rate gives the NPP values :math:`\\lambda\\mu` and :math:`\\lambda\\mu + \\lambda^2\\sigma^2`.

    Args:
        rates: a constant level, a :class:`ConstantRate`, or a list of them.
        clock_moments ((float, float)): e.g. from :func:`oracle_clock_moments`.
    """
    levels = _levels(rates)
    mu, var = clock_moments
    m = sum(j * x for j, x in enumerate(levels, 1))
    q = sum(j * j * x for j, x in enumerate(levels, 1))
    return m * mu, q * mu + m * m * var


def oracle_space_fractional_pgf(lam, beta, v, t):
    """
    :math:`E[v^{N(D_\\beta(t))}] = e^{-t\\lambda^\\beta(1-v)^\\beta}` for a Poisson process with
    constant rate :math:`\\lambda` run on a :math:`\\beta`-stable subordinator.
    """
    lam, beta, v, t = float(lam), float(beta), float(v), _check_t(t)
    if not np.isfinite(lam) or lam < 0:
        raise DomainError("lambda must be finite and >= 0, got {}".format(lam), param='lambda')
    if not 0 < beta < 1:
        raise DomainError("beta must lie in (0, 1), got {}".format(beta), param='beta')
    if not 0 <= v <= 1:
        raise DomainError("v must lie in [0, 1], got {}".format(v), param='v')
    return float(np.exp(-t * lam ** beta * (1 - v) ** beta))
