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

"""Random variates for exponentially tempered power-law waiting times.

The waiting-time density is phi(t) = exp(lambda^alpha - lambda t) L_alpha(t),
where L_alpha is the one-sided alpha-stable density with Laplace transform
exp(-u^alpha). Its Laplace transform is exp(lambda^alpha - (u + lambda)^alpha).

One-sided stable variates are drawn with Kanter's representation
X = (A(U) / E)^((1-alpha)/alpha), U ~ Uniform(0, pi), E ~ Exp(1), with the
Zolotarev function A. The same function gives a non-oscillatory integral
representation of the density and distribution function, used by the
power-law envelope sampler and by tests.

Two tempering strategies are available:
    - exp_tilt_rejection: draw X ~ L_alpha and accept with probability
      exp(-lambda X). The acceptance rate is exp(-lambda^alpha).
    - powerlaw_envelope: draw from f1(x) = alpha t0^alpha x^(-alpha-1) on
      [t0, inf) and accept with probability H(x) / M, with H = phi / f1 and
      M = max H. Samples are truncated below t0.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline
from scipy.optimize import minimize_scalar
from scipy.special import gamma, gammaln

from tempered_actrw.helpers.exceptions import ConfigurationError


class SamplerStrategy(str, Enum):
    """Tempering strategies of the waiting-time sampler."""
    exp_tilt_rejection = "exp_tilt_rejection"
    powerlaw_envelope = "powerlaw_envelope"


@dataclass(frozen=True)
class WaitingTimeModel:
    """Exponentially tempered power-law waiting-time law.

    Attributes:
        alpha (float): Stability index, in (0, 1).
        lam (float): Tempering rate lambda (1/time), non-negative.
        strategy (SamplerStrategy): Tempering strategy used by the sampler.
        t0 (float): Lower cutoff of the power-law envelope.
    """
    alpha: float
    lam: float = 0.
    strategy: SamplerStrategy = SamplerStrategy.exp_tilt_rejection
    t0: float = 1e-3

    def __post_init__(self):
        if not 0. < self.alpha < 1.:
            raise ValueError(f"Waiting-time alpha must lie in (0, 1), got {self.alpha}.")
        if not self.lam >= 0.:
            raise ValueError(f"Tempering rate lambda must be non-negative, got {self.lam}.")
        try:
            object.__setattr__(self, "strategy", SamplerStrategy(self.strategy))
        except ValueError:
            raise ValueError(f"Unknown sampler strategy {self.strategy}. "
                             f"Supported: {[s.value for s in SamplerStrategy]}.")
        if self.strategy is SamplerStrategy.powerlaw_envelope and not self.t0 > 0.:
            raise ValueError(f"Envelope cutoff t0 must be positive, got {self.t0}.")

    @property
    def lam_alpha(self):
        """lambda^alpha, the log of the normalization of the tempered law."""
        return self.lam ** self.alpha


def zolotarev_function(alpha, u):
    """Zolotarev function
    A(u) = sin(alpha u)^(alpha/(1-alpha)) sin((1-alpha) u) / sin(u)^(1/(1-alpha)),
    for u in (0, pi).
    """
    return (np.sin(alpha * u) ** (alpha / (1. - alpha)) * np.sin((1. - alpha) * u)
            / np.sin(u) ** (1. / (1. - alpha)))


def sample_one_sided_stable(alpha, rng, size=None):
    """Draw one-sided alpha-stable variates with Laplace transform exp(-u^alpha).

    Args:
        alpha (float): Stability index, in (0, 1).
        rng (numpy.random.Generator): Source of randomness.
        size (int): Number of variates. A single float is returned if None.

    Returns:
        float or array: Positive variates.
    """
    if not 0. < alpha < 1.:
        raise ValueError(f"Stable index alpha must lie in (0, 1), got {alpha}.")
    # U in (0, pi]: sin(U) never vanishes.
    u = np.pi * (1. - rng.random(size))
    e = rng.standard_exponential(size)
    return (zolotarev_function(alpha, u) / e) ** ((1. - alpha) / alpha)


def _stable_series_threshold(alpha):
    return 5. ** (1. / alpha)


def _stable_pdf_series(alpha, x, n_terms=60):
    """Convergent large-x series of the one-sided stable density."""
    x = np.asarray(x, dtype=float)
    k = np.arange(1, n_terms + 1)
    signs = (-1.) ** (k + 1) * np.sin(np.pi * alpha * k)
    log_coeffs = gammaln(alpha * k + 1.) - gammaln(k + 1.)
    log_x = np.log(x)[..., None]
    terms = signs * np.exp(log_coeffs - (alpha * k + 1.) * log_x)
    return np.sum(terms, axis=-1) / np.pi


def _stable_pdf_integral(alpha, x):
    """Zolotarev integral representation of the one-sided stable density."""
    scale = x ** (-alpha / (1. - alpha))

    def integrand(u):
        a = zolotarev_function(alpha, u)
        return a * np.exp(-a * scale)

    value, _ = quad(integrand, 0., np.pi, limit=200)
    return alpha / (1. - alpha) * x ** (-1. / (1. - alpha)) * value / np.pi


def one_sided_stable_pdf(alpha, x):
    """Density L_alpha(x) of the one-sided stable law.

    Args:
        alpha (float): Stability index, in (0, 1).
        x (float or array): Positive arguments.

    Returns:
        float or array: Density values, same shape as x.
    """
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(x_arr)
    far = x_arr >= _stable_series_threshold(alpha)
    out[far] = _stable_pdf_series(alpha, x_arr[far])
    for i in np.nonzero((x_arr > 0.) & ~far)[0]:
        out[i] = _stable_pdf_integral(alpha, x_arr[i])
    return float(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))


def one_sided_stable_cdf(alpha, x):
    """Distribution function of the one-sided stable law,
    P(X <= x) = (1/pi) int_0^pi exp(-A(u) x^(-alpha/(1-alpha))) du.
    """
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros_like(x_arr)
    for i in np.nonzero(x_arr > 0.)[0]:
        scale = x_arr[i] ** (-alpha / (1. - alpha))
        value, _ = quad(lambda u: np.exp(-zolotarev_function(alpha, u) * scale), 0., np.pi, limit=200)
        out[i] = value / np.pi
    return float(out[0]) if np.ndim(x) == 0 else out.reshape(np.shape(x))


def tempered_waiting_pdf(model, t):
    """Waiting-time density phi(t) = exp(lambda^alpha - lambda t) L_alpha(t)."""
    t_arr = np.asarray(t, dtype=float)
    return np.exp(model.lam_alpha - model.lam * t_arr) * one_sided_stable_pdf(model.alpha, t_arr)


@dataclass(frozen=True)
class PowerLawEnvelope:
    """Rejection envelope of the powerlaw_envelope strategy.

    Attributes:
        t0 (float): Lower cutoff of the envelope.
        bound (float): M, the maximum of H = phi / f1.
        log_x_table (array): Log grid of the tabulated region.
        log_h_table (array): log H on the grid.
    """
    t0: float
    bound: float
    log_x_table: np.ndarray
    log_h_table: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "_log_h", CubicSpline(self.log_x_table, self.log_h_table))

    def ratio(self, model, x):
        """H(x) = phi(x) / f1(x) for an array of x >= t0."""
        x = np.asarray(x, dtype=float)
        h = np.empty_like(x)
        x_far = np.exp(self.log_x_table[-1])
        far = x >= x_far
        if np.any(far):
            xf = x[far]
            h[far] = (np.exp(model.lam_alpha - model.lam * xf) * _stable_pdf_series(model.alpha, xf)
                      * xf ** (model.alpha + 1.) / (model.alpha * self.t0 ** model.alpha))
        if np.any(~far):
            h[~far] = np.exp(self._log_h(np.log(x[~far])))
        return h


@lru_cache(maxsize=32)
def powerlaw_envelope(model, n_grid=400):
    """Tabulate H = phi / f1 on [t0, x_far] and compute its bound M by
    bounded maximization.

    Args:
        model (WaitingTimeModel): Waiting-time law (t0 is read from it).
        n_grid (int): Number of tabulation points.

    Returns:
        PowerLawEnvelope: Envelope data.
    """
    alpha, t0 = model.alpha, model.t0
    x_far = max(_stable_series_threshold(alpha), 2. * t0)
    log_x = np.linspace(np.log(t0), np.log(x_far), n_grid)
    x = np.exp(log_x)
    h = np.array([tempered_waiting_pdf(model, xi) for xi in x]) * x ** (alpha + 1.) / (alpha * t0 ** alpha)
    log_h = np.log(np.maximum(h, 1e-300))
    envelope = PowerLawEnvelope(t0, 0., log_x, log_h)

    # Beyond the table H is analytic: scan it on a log grid up to where it is negligible.
    x_end = x_far * 1e6 if model.lam == 0. else max(x_far, 60. / model.lam)
    log_scan = np.linspace(np.log(t0), np.log(x_end), 2000)
    h_scan = envelope.ratio(model, np.exp(log_scan))
    i_max = int(np.argmax(h_scan))
    lo, hi = log_scan[max(i_max - 1, 0)], log_scan[min(i_max + 1, len(log_scan) - 1)]
    best = minimize_scalar(lambda y: -envelope.ratio(model, np.array([np.exp(y)]))[0],
                           bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
    bound = max(h_scan[i_max], -best.fun)
    if model.lam == 0.:
        # H tends to 1 / (Gamma(1-alpha) t0^alpha) at infinity.
        bound = max(bound, 1. / (gamma(1. - alpha) * t0 ** alpha))
    return PowerLawEnvelope(t0, bound, log_x, log_h)


class TemperedWaitingSampler:
    """Sampler of the tempered waiting-time law, keeping acceptance statistics.

    Args:
        model (WaitingTimeModel): Waiting-time law and strategy.

    Attributes:
        n_proposed (int): Number of proposals drawn so far.
        n_accepted (int): Number of accepted proposals.
    """

    def __init__(self, model):
        self.model = model
        self.n_proposed = 0
        self.n_accepted = 0
        self.envelope = powerlaw_envelope(model) if model.strategy is SamplerStrategy.powerlaw_envelope else None

    @property
    def acceptance_rate(self):
        return self.n_accepted / self.n_proposed if self.n_proposed else float("nan")

    def expected_acceptance_rate(self):
        """exp(-lambda^alpha) for the exponential tilt, 1/M for the envelope."""
        if self.envelope is None:
            return np.exp(-self.model.lam_alpha)
        return 1. / self.envelope.bound

    def _propose(self, rng, n):
        alpha, lam = self.model.alpha, self.model.lam
        if self.envelope is None:
            x = sample_one_sided_stable(alpha, rng, n)
            accept = rng.random(n) < np.exp(-lam * x)
        else:
            x = self.envelope.t0 * (1. - rng.random(n)) ** (-1. / alpha)
            h = self.envelope.ratio(self.model, x)
            if np.any(h > self.envelope.bound * (1. + 1e-9)):
                raise ConfigurationError(f"Envelope bound M = {self.envelope.bound} is exceeded by "
                                         f"H = {np.max(h)}: the rejection envelope is invalid.")
            accept = rng.random(n) * self.envelope.bound < h
        self.n_proposed += n
        self.n_accepted += int(np.count_nonzero(accept))
        return x[accept]

    def sample(self, rng, size=None):
        """Draw tempered waiting times.

        Args:
            rng (numpy.random.Generator): Source of randomness.
            size (int): Number of variates. A single float is returned if None.

        Returns:
            float or array: Waiting times.
        """
        n_wanted = 1 if size is None else int(size)
        rate = max(self.expected_acceptance_rate(), 1e-3)
        chunks, n_have = [], 0
        while n_have < n_wanted:
            n_prop = max(16, int(1.1 * (n_wanted - n_have) / rate))
            accepted = self._propose(rng, n_prop)
            chunks.append(accepted)
            n_have += len(accepted)
        samples = np.concatenate(chunks)[:n_wanted]
        return float(samples[0]) if size is None else samples


def sample_tempered_waiting(model, rng, size=None):
    """Draw variates with density phi(t) of the tempered power law.

    Args:
        model (WaitingTimeModel): Waiting-time law and strategy.
        rng (numpy.random.Generator): Source of randomness.
        size (int): Number of variates. A single float is returned if None.

    Returns:
        float or array: Waiting times.
    """
    if model.lam == 0. and model.strategy is SamplerStrategy.exp_tilt_rejection:
        return sample_one_sided_stable(model.alpha, rng, size)
    return TemperedWaitingSampler(model).sample(rng, size)
