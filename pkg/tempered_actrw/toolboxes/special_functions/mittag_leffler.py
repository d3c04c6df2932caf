# Copyright 2023 Good Chemistry Company.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Two-parameter Mittag-Leffler function on the real axis, and the auxiliary
function g(z) = z^(alpha-1) exp(-lambda z) E_{alpha,alpha}((lambda z)^alpha)
governing the renewal density of tempered power-law waiting times.

Evaluation strategy:
    - z >= 0, z <= z*: power series, summed in log space (all terms are
      positive, so no cancellation occurs).
    - z > z*: large-argument expansion
      E(z) ~ z^((1-beta)/alpha) exp(z^(1/alpha)) / alpha
             - sum_{k=1..4} z^(-k) / Gamma(beta - alpha k).
    - z < 0: the alternating series cancels catastrophically in double
      precision. It is summed with mpmath at a working precision matching the
      size of the largest term, as long as |z|^(1/alpha) <= 1000. Beyond that
      the algebraic expansion -sum_{k=1..4} z^(-k) / Gamma(beta - alpha k)
      is used.

z*(alpha, beta) is the largest argument whose series converges within 200
terms, but never less than the argument where the large-argument expansion
reaches double precision (z^(1/alpha) = 40).
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import mpmath
from scipy.optimize import brentq
from scipy.special import gammaln, logsumexp, rgamma


# Number of correction terms in both asymptotic expansions.
N_ASYMPTOTIC_TERMS = 4
# Series length defining the crossover z*.
N_SERIES_TERMS = 200
# Largest |z|^(1/alpha) for which the negative-axis series is summed.
MAX_NEGATIVE_SERIES_EXPONENT = 1000.
# Log of the largest representable double.
LOG_MAX_FLOAT = np.log(np.finfo(float).max)
# Relative size of the last series term.
_LOG_SERIES_EPS = np.log(1e-18)


@dataclass(frozen=True)
class MlfParams:
    """Parameters of the Mittag-Leffler function E_{alpha,beta}.

    Attributes:
        alpha (float): First parameter, in (0, 2).
        beta (float): Second parameter, positive.
    """
    alpha: float
    beta: float

    def __post_init__(self):
        if not 0. < self.alpha < 2.:
            raise ValueError(f"Mittag-Leffler alpha must lie in (0, 2), got {self.alpha}.")
        if not self.beta > 0.:
            raise ValueError(f"Mittag-Leffler beta must be positive, got {self.beta}.")


def _log_terms(alpha, beta, log_z, n_terms):
    k = np.arange(n_terms)
    return np.multiply.outer(log_z, k) - gammaln(alpha * k + beta)


def _ml_series_positive(alpha, beta, z):
    """Log of the power series for an array of positive arguments."""
    log_z = np.log(z)
    n_terms = N_SERIES_TERMS
    while True:
        log_t = _log_terms(alpha, beta, log_z, n_terms)
        log_sum = logsumexp(log_t, axis=-1)
        if np.all(log_t[..., -1] - log_sum < _LOG_SERIES_EPS):
            return log_sum
        n_terms *= 2


def _ml_asymptotic_positive(alpha, beta, z):
    """Large positive argument expansion. Raises OverflowError when the
    exponential is not representable.
    """
    z = np.asarray(z, dtype=float)
    exponent = z ** (1. / alpha)
    if np.any(exponent > LOG_MAX_FLOAT):
        raise OverflowError(f"E_{{{alpha},{beta}}}(z) overflows double precision for z = {np.max(z)} "
                            f"(z^(1/alpha) = {np.max(exponent)}).")
    value = z ** ((1. - beta) / alpha) * np.exp(exponent) / alpha
    for k in range(1, N_ASYMPTOTIC_TERMS + 1):
        value = value - z ** (-k) * rgamma(beta - alpha * k)
    return value


def _ml_asymptotic_negative(alpha, beta, z):
    """Algebraic expansion for large negative arguments."""
    value = 0.
    for k in range(1, N_ASYMPTOTIC_TERMS + 1):
        value -= z ** (-k) * rgamma(beta - alpha * k)
    return value


def _ml_series_negative(alpha, beta, z):
    """Alternating series for a negative argument, summed with mpmath."""
    x = -z
    peak_log = x ** (1. / alpha)
    dps = 30 + int(peak_log / np.log(10.))
    with mpmath.workdps(dps):
        a, b, zm = mpmath.mpf(alpha), mpmath.mpf(beta), mpmath.mpf(z)
        eps = mpmath.mpf(10) ** (-25)
        total = mpmath.mpf(0)
        power = mpmath.mpf(1)
        k = 0
        k_peak = peak_log / alpha
        while True:
            term = power * mpmath.rgamma(a * k + b)
            total += term
            if k > k_peak and abs(term) <= eps * abs(total):
                break
            power *= zm
            k += 1
        return float(total)


@lru_cache(maxsize=128)
def series_radius(alpha, beta):
    """Crossover argument z* between the power series and the large-argument
    expansion on the positive axis.

    Args:
        alpha (float): First Mittag-Leffler parameter.
        beta (float): Second Mittag-Leffler parameter.

    Returns:
        float: z* such that the series needs at most 200 terms below it.
    """
    def tail_excess(log_z):
        log_t = _log_terms(alpha, beta, log_z, N_SERIES_TERMS)
        return log_t[-1] - np.max(log_t) - _LOG_SERIES_EPS

    # tail_excess is increasing in z: bracket its root on a log scale.
    lo, hi = -10., 1.
    while tail_excess(hi) < 0.:
        hi += 1.
    z_series = np.exp(brentq(tail_excess, lo, hi, xtol=1e-6))
    return max(z_series, 40. ** alpha)


def _mittag_leffler_array(alpha, beta, z):
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)

    zero = z == 0.
    out[zero] = rgamma(beta)

    z_star = series_radius(alpha, beta)
    series = (z > 0.) & (z <= z_star)
    if np.any(series):
        log_value = _ml_series_positive(alpha, beta, z[series])
        if np.any(log_value > LOG_MAX_FLOAT):
            raise OverflowError(f"E_{{{alpha},{beta}}}(z) overflows double precision.")
        out[series] = np.exp(log_value)

    large = z > z_star
    if np.any(large):
        out[large] = _ml_asymptotic_positive(alpha, beta, z[large])

    for index in zip(*np.nonzero(z < 0.)):
        zi = float(z[index])
        if (-zi) ** (1. / alpha) <= MAX_NEGATIVE_SERIES_EXPONENT:
            out[index] = _ml_series_negative(alpha, beta, zi)
        else:
            out[index] = _ml_asymptotic_negative(alpha, beta, zi)
    return out


def mittag_leffler(params, z):
    """Two-parameter Mittag-Leffler function
    E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta) for real z.

    Args:
        params (MlfParams): alpha and beta.
        z (float or array): Real argument(s).

    Returns:
        float or array: E_{alpha,beta}(z), same shape as z.

    Raises:
        OverflowError: If the value is not representable in double precision.
    """
    z_arr = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z_arr)):
        raise ValueError("Mittag-Leffler argument must be finite.")
    value = _mittag_leffler_array(params.alpha, params.beta, np.atleast_1d(z_arr))
    return float(value[0]) if z_arr.ndim == 0 else value.reshape(z_arr.shape)


def g_aux(model, z):
    """Auxiliary function g(z) = z^(alpha-1) exp(-lambda z) E_{alpha,alpha}((lambda z)^alpha).

    g is the renewal density of the tempered waiting-time law. It behaves as
    z^(alpha-1)/Gamma(alpha) for lambda z << 1 and tends to the plateau
    lambda^(1-alpha)/alpha for lambda z >> 1. In the latter regime the leading
    exponential of the Mittag-Leffler expansion cancels exp(-lambda z)
    analytically, so no overflow can occur.

    Args:
        model (WaitingTimeModel): Any object exposing `alpha` and `lam`.
        z (float or array): Positive argument(s).

    Returns:
        float or array: g(z), same shape as z.
    """
    alpha, lam = model.alpha, model.lam
    z_arr = np.asarray(z, dtype=float)
    if np.any(z_arr <= 0.):
        raise ValueError(f"g(z) requires z > 0 (it diverges at the origin), got {np.min(z_arr)}.")
    z1 = np.atleast_1d(z_arr)

    if lam == 0.:
        value = z1 ** (alpha - 1.) * rgamma(alpha)
    else:
        w = (lam * z1) ** alpha
        value = np.empty_like(z1)
        plateau = w > series_radius(alpha, alpha)
        if np.any(plateau):
            zp, wp = z1[plateau], w[plateau]
            correction = sum(wp ** (-k) * rgamma(alpha - alpha * k) for k in range(1, N_ASYMPTOTIC_TERMS + 1))
            value[plateau] = lam ** (1. - alpha) / alpha - zp ** (alpha - 1.) * np.exp(-lam * zp) * correction
        near = ~plateau
        if np.any(near):
            zn = z1[near]
            log_e = _ml_series_positive(alpha, alpha, w[near])
            value[near] = np.exp((alpha - 1.) * np.log(zn) - lam * zn + log_e)

    return float(value[0]) if z_arr.ndim == 0 else value.reshape(z_arr.shape)
