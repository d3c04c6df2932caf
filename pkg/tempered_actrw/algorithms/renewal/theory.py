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

"""Analytical counterparts of the aging renewal statistics.

Every quantity has an exact mode, which inverts its double Laplace transform
in (s, u) -> (t_a, t) on nested Talbot contours, and an asymptotic mode,
which returns the closed form valid in the regime cell of the window (see
regimes.py) and raises RegimeError in crossover cells.

The exact mode uses the exact waiting-time transform phi(u) = exp(-L(u)) by
default, so that it is directly comparable with Monte Carlo ensembles. With
small_u_law=True the small-u law phi(u) = 1 - L(u) is inverted instead; the
closed forms of the asymptotic mode derive from that law.
"""

from math import sin, pi

import mpmath
import numpy as np
from scipy.integrate import quad
from scipy.special import gamma, gammainc, rgamma, stirling2

from tempered_actrw.helpers.exceptions import RegimeError
from tempered_actrw.helpers.math import graded_integral, peaked_integral
from tempered_actrw.toolboxes.laplace import LaplacePoint, tempered_exponent, forward_waiting_lt, \
    principal_power, mean_waiting_time, double_inverse_laplace, stehfest_inverse
from tempered_actrw.toolboxes.sampling import tempered_waiting_pdf
from tempered_actrw.toolboxes.special_functions import g_aux, upper_incomplete_gamma
from tempered_actrw.algorithms.renewal.regimes import Scale, classify_regime


THEORY_MODES = ("exact", "asymptotic")
# Beyond lambda z = PLATEAU_ONSET the renewal density g is integrated with
# plain adaptive quadrature.
PLATEAU_ONSET = 50.


def _check_mode(mode, allowed=THEORY_MODES):
    if mode not in allowed:
        raise ValueError(f"Unknown theory mode {mode}, expected one of {allowed}.")


def _check_window(t_a, t):
    if not t_a >= 0.:
        raise ValueError(f"Aging time t_a must be non-negative, got {t_a}.")
    if not t > 0.:
        raise ValueError(f"Observation time t must be positive, got {t}.")


def _regime_error(quantity, model, window, cell):
    return RegimeError(f"No asymptotic form of {quantity} holds at t_a = {window.t_a}, t = {window.t}, "
                       f"lambda = {model.lam} (regime {cell.label}); use mode='exact'.")


def _one_minus_phi(exponent, small_u_law):
    return exponent if small_u_law else -np.expm1(-exponent)


def _phi(exponent, small_u_law):
    return 1. - exponent if small_u_law else np.exp(-exponent)


def integrated_renewal_density(model, t):
    """Renewal function (1 * g)(t) = int_0^t g(z) dz of the small-u law.

    It equals t^alpha / Gamma(1 + alpha) for lambda = 0 and grows as
    t / <tau> for lambda t >> 1.
    """
    if t < 0.:
        raise ValueError(f"Renewal function requires t >= 0, got {t}.")
    if t == 0.:
        return 0.
    alpha = model.alpha
    if model.lam == 0.:
        return t ** alpha * rgamma(1. + alpha)
    split = min(t, PLATEAU_ONSET / model.lam)
    head = graded_integral(lambda z: z ** (1. - alpha) * g_aux(model, z), split, alpha)
    if split == t:
        return head
    return head + quad(lambda z: g_aux(model, z), split, t, limit=200)[0]


def survival_kernel(model, t):
    """h(t) = [exp(-lambda t) t^(-alpha) - lambda^alpha Gamma(1-alpha, lambda t)] / Gamma(1-alpha),
    the inverse transform of L(u) / u.

    It is the survival function of the small-u law, t^(-alpha) / Gamma(1-alpha)
    for lambda = 0.
    """
    a = 1. - model.alpha
    if model.lam == 0.:
        return t ** (-model.alpha) * rgamma(a)
    return (np.exp(-model.lam * t) * t ** (-model.alpha)
            - model.lam_alpha * upper_incomplete_gamma(a, model.lam * t)) * rgamma(a)


def integrated_survival_kernel(model, t):
    """k(t) = int_0^t h, the inverse transform of L(u) / u^2.

    t^(1-alpha) / Gamma(2-alpha) for lambda = 0, close to
    t^(1-alpha) / Gamma(2-alpha) - lambda^alpha t for lambda t << 1, and
    tending to <tau> for lambda t >> 1.
    """
    a = 1. - model.alpha
    if model.lam == 0.:
        return t ** a * rgamma(1. + a)
    x = model.lam * t
    lower_a = gammainc(a, x) * gamma(a)
    lower_a1 = gammainc(a + 1., x) * gamma(a + 1.)
    return model.lam ** (-a) * rgamma(a) * (lower_a - x * upper_incomplete_gamma(a, x) - lower_a1)


def _survival_transform(model, small_u_law):
    def transform(s, u):
        omega = forward_waiting_lt(model, LaplacePoint(s, u), asymptotic=small_u_law)
        return 1. / (s * u) - omega / u
    return transform


def _count_transform(model, n, small_u_law):
    def transform(s, u):
        omega = forward_waiting_lt(model, LaplacePoint(s, u), asymptotic=small_u_law)
        exponent = tempered_exponent(model, u)
        return omega * _phi(exponent, small_u_law) ** (n - 1) * _one_minus_phi(exponent, small_u_law) / u
    return transform


def _moment_transform(model, p, small_u_law):
    """<n_a^p>(s, u). Integer orders of the exact law combine factorial
    moments k! omega phi^(k-1) / (u (1-phi)^k) with Stirling numbers; other
    orders use Gamma(p+1) omega / (u L(u)^p).
    """
    if small_u_law or p != int(p):
        def transform(s, u):
            omega = forward_waiting_lt(model, LaplacePoint(s, u), asymptotic=True)
            return gamma(p + 1.) * omega / (u * principal_power(tempered_exponent(model, u), p))
        return transform

    p = int(p)
    weights = [stirling2(p, k, exact=True) * gamma(k + 1.) for k in range(1, p + 1)]

    def transform(s, u):
        omega = forward_waiting_lt(model, LaplacePoint(s, u))
        exponent = tempered_exponent(model, u)
        phi, one_minus_phi = np.exp(-exponent), -np.expm1(-exponent)
        total = sum(float(w) * phi ** (k - 1) / one_minus_phi ** k for k, w in enumerate(weights, start=1))
        return omega * total / u
    return transform


def survival_probability_theory(model, window, mode="exact", small_u_law=False):
    """Survival probability P0(t_a, t) of no renewal in (t_a, t_a + t].

    Exact mode inverts P0(s, u) = 1/(s u) - omega(s, u)/u. Asymptotic mode
    returns, in this order of precedence,
    1 - g(t_a) k(t) for strong aging (t << t_a),
    1 - k(t) / <tau> for lambda t_a >> 1,
    (1 * g)(t_a) h(t) for weak aging (t_a << t),
    where h and k are the survival kernels of the small-u law. For
    lambda t << 1 these reduce to 1 - g(t_a)(t^(1-alpha)/Gamma(2-alpha) - lambda^alpha t),
    1 - t^(1-alpha)/(<tau> Gamma(2-alpha)) and
    sin(pi alpha)/(pi alpha) (t/t_a)^(-alpha).

    Args:
        model (WaitingTimeModel): Waiting-time law.
        window (AgingWindow): Observation window.
        mode (str): "exact" or "asymptotic".
        small_u_law (bool): In exact mode, invert the small-u law.

    Returns:
        float: P0(t_a, t), clamped to [0, 1].

    Raises:
        RegimeError: In asymptotic mode, if the window lies in a crossover
            cell.
    """
    _check_mode(mode)
    if mode == "exact":
        value = double_inverse_laplace(_survival_transform(model, small_u_law), window.t_a, window.t)
        return float(np.clip(value, 0., 1.))

    cell = classify_regime(model, window)
    if cell.strong_aging:
        value = 1. - g_aux(model, window.t_a) * integrated_survival_kernel(model, window.t)
    elif cell.lam_t_a is Scale.large:
        value = 1. - integrated_survival_kernel(model, window.t) / mean_waiting_time(model)
    elif cell.weak_aging:
        value = integrated_renewal_density(model, window.t_a) * survival_kernel(model, window.t)
    else:
        raise _regime_error("the survival probability", model, window, cell)
    return float(np.clip(value, 0., 1.))


def mean_renewals_theory(model, window, mode="exact", small_u_law=False):
    """Mean number of renewals <n_a(t_a, t)>.

    Exact mode inverts omega(s, u) / (u (1 - phi(u))); with small_u_law it
    inverts [1/L(u) - 1/L(s)] / (u (s - u)). Asymptotic mode returns
    t g(t_a) for strong aging, (1 * g)(t) for weak aging and t / <tau> when
    both lambda t_a >> 1 and lambda t >> 1.

    Args:
        model (WaitingTimeModel): Waiting-time law.
        window (AgingWindow): Observation window.
        mode (str): "exact" or "asymptotic".
        small_u_law (bool): In exact mode, invert the small-u law.

    Returns:
        float: <n_a(t_a, t)>.
    """
    _check_mode(mode)
    if mode == "exact":
        return double_inverse_laplace(_moment_transform(model, 1, small_u_law), window.t_a, window.t)

    cell = classify_regime(model, window)
    if cell.strong_aging:
        return window.t * g_aux(model, window.t_a)
    if cell.weak_aging:
        return integrated_renewal_density(model, window.t)
    if cell.lam_t_a is Scale.large and cell.lam_t is Scale.large:
        return window.t / mean_waiting_time(model)
    raise _regime_error("the mean number of renewals", model, window, cell)


def moment_renewals_theory(model, window, p, mode="exact", small_u_law=False):
    """Moment <n_a^p(t_a, t)> of order p > 0.

    Exact mode inverts the factorial-moment combination of the exact law for
    integer p, and Gamma(p+1) omega(s, u) / (u L(u)^p) of the small-u law
    otherwise. Asymptotic mode returns
    Gamma(p+1)/Gamma(2+alpha p-alpha) g(t_a) t^(alpha p-alpha+1) for strong
    aging with lambda t << 1, Gamma(p+1) t^(alpha p)/Gamma(1+alpha p) for weak
    aging with lambda t << 1 and (t / <tau>)^p for lambda t >> 1.

    Args:
        model (WaitingTimeModel): Waiting-time law.
        window (AgingWindow): Observation window.
        p (float): Order, positive.
        mode (str): "exact" or "asymptotic".
        small_u_law (bool): In exact mode, invert the small-u law.

    Returns:
        float: <n_a^p>.
    """
    _check_mode(mode)
    if not p > 0.:
        raise ValueError(f"Moment order p must be positive, got {p}.")
    if mode == "exact":
        return double_inverse_laplace(_moment_transform(model, p, small_u_law), window.t_a, window.t)

    alpha, t = model.alpha, window.t
    cell = classify_regime(model, window)
    if cell.lam_t is Scale.small and cell.strong_aging:
        return gamma(p + 1.) * rgamma(2. + alpha * p - alpha) * g_aux(model, window.t_a) \
            * t ** (alpha * p - alpha + 1.)
    if cell.lam_t is Scale.small and cell.weak_aging:
        return gamma(p + 1.) * t ** (alpha * p) * rgamma(1. + alpha * p)
    if cell.lam_t is Scale.large:
        return (t / mean_waiting_time(model)) ** p
    raise _regime_error(f"the moment of order {p}", model, window, cell)


def renewal_count_distribution_theory(model, window, n, small_u_law=False):
    """Probability P(n_a(t_a, t) = n), by inversion of
    omega(s, u) phi(u)^(n-1) (1 - phi(u)) / u for n >= 1 and of the survival
    probability for n = 0.
    """
    if int(n) != n or n < 0:
        raise ValueError(f"Renewal count must be a non-negative integer, got {n}.")
    if n == 0:
        return survival_probability_theory(model, window, "exact", small_u_law)
    value = double_inverse_laplace(_count_transform(model, int(n), small_u_law), window.t_a, window.t)
    return float(np.clip(value, 0., 1.))


def _tail_density(model, x):
    """exp(-lambda x) x^(-alpha-1) / (-Gamma(-alpha)), the tail of the small-u law."""
    return np.exp(-model.lam * x) * x ** (-model.alpha - 1.) / (-gamma(-model.alpha))


def _forward_waiting_exact(model, t_a, t):
    def left(sigma):
        return g_aux(model, t_a - sigma) * _tail_density(model, sigma + t)

    def right(tau):
        return tau ** (1. - model.alpha) * g_aux(model, tau) * _tail_density(model, t_a - tau + t)

    half = 0.5 * t_a
    return peaked_integral(left, half, t, atol=1e-14, rtol=1e-8) \
        + graded_integral(right, half, model.alpha, atol=1e-14, rtol=1e-8)


def _forward_waiting_asymptotic(model, t_a, t):
    alpha, lam = model.alpha, model.lam
    lam_t_a = lam * t_a
    if lam_t_a < 0.1:
        return sin(pi * alpha) / pi * np.exp(-lam * (t + t_a)) * (t_a / t) ** alpha / (t + t_a)
    if lam_t_a > 10.:
        upper = min(t_a, PLATEAU_ONSET / lam)
        integral = quad(lambda tau: np.exp(-lam * tau) * tau ** alpha / (tau + t), 0., upper, limit=200)[0]
        return lam * np.exp(-lam * t) * sin(pi * alpha) / (alpha * pi * t ** alpha) * integral
    raise RegimeError(f"No asymptotic form of the forward waiting-time density holds at lambda t_a = {lam_t_a}; "
                      "use mode='exact'.")


def _forward_waiting_mixed(model, t_a, t):
    alpha, lam = model.alpha, model.lam
    scale = gamma(-alpha)

    def transform(s):
        out = []
        for si in np.atleast_1d(s):
            shifted = si + lam
            tail = mpmath.exp(si * t) * mpmath.gammainc(-alpha, shifted * t)
            out.append(float(shifted ** alpha / (model.lam_alpha - shifted ** alpha) * tail) / scale)
        return np.array(out)

    return stehfest_inverse(transform, t_a)


def forward_waiting_pdf(model, t_a, t, mode="exact"):
    """Density omega(t_a, t) of the forward waiting time, the time from t_a
    to the first renewal after it, for the small-u law.

    exact: quadrature of
    omega(t_a, t) = int_0^t_a g(tau) exp(-lambda (t_a - tau + t)) (t_a - tau + t)^(-alpha-1) dtau / (-Gamma(-alpha)),
    split at t_a / 2 into a part peaked at tau = t_a on the scale t and a
    part with the tau^(alpha-1) singularity of g.
    asymptotic: sin(pi alpha) exp(-lambda (t+t_a)) (t_a/t)^alpha / (pi (t+t_a))
    for lambda t_a << 1, and
    lambda exp(-lambda t) sin(pi alpha) / (alpha pi t^alpha) int_0^t_a exp(-lambda tau) tau^alpha / (tau+t) dtau
    for lambda t_a >> 1.
    mixed: Gaver-Stehfest inversion in s of the incomplete-gamma
    representation omega(s, t).

    At t_a = 0 the forward waiting time is the first waiting time itself and
    the exact and mixed modes return phi(t); the asymptotic mode returns 0,
    the whole mass sitting in the atom at t = 0.

    Args:
        model (WaitingTimeModel): Waiting-time law.
        t_a (float): Aging time, non-negative.
        t (float or array): Positive time(s).
        mode (str): "exact", "asymptotic" or "mixed".

    Returns:
        float or array: omega(t_a, t).
    """
    _check_mode(mode, THEORY_MODES + ("mixed",))
    times = np.atleast_1d(np.asarray(t, dtype=float))
    for ti in times:
        _check_window(t_a, ti)

    if t_a == 0. and mode != "asymptotic":
        values = np.asarray(tempered_waiting_pdf(model, times), dtype=float)
    else:
        evaluate = {"exact": _forward_waiting_exact, "asymptotic": _forward_waiting_asymptotic,
                    "mixed": _forward_waiting_mixed}[mode]
        values = np.array([evaluate(model, t_a, ti) for ti in times])
    return float(values.ravel()[0]) if np.ndim(t) == 0 else values
