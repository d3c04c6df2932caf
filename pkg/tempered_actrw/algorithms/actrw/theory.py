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

"""Analytical counterparts of the aging walk: mean squared displacement,
propagator and the renewal-count correlations entering the
fluctuation-response relation.

The propagator is the inverse Laplace transform in u of closed expressions
built on F1(u, x) = q exp(-q |x|), q = sqrt(L(u) / (D (1 - L(u)))), with
D = M2 / 2. F1 integrates to 2 over x, hence the factor 1/2 in both
prefactors. The transform has a spurious branch point where L(u) = 1, i.e.
at u* = (1 + lambda^alpha)^(1/alpha) - lambda on the positive axis, so the
Talbot contour is kept to its left.
"""

from enum import Enum

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma, rgamma

from tempered_actrw.helpers.exceptions import RegimeError
from tempered_actrw.helpers.math import singular_convolution
from tempered_actrw.toolboxes.laplace import tempered_exponent, inverse_laplace
from tempered_actrw.toolboxes.special_functions import g_aux
from tempered_actrw.algorithms.renewal import classify_regime, mean_renewals_theory, moment_renewals_theory, \
    integrated_renewal_density
from tempered_actrw.algorithms.renewal.regimes import MUCH_SMALLER, MUCH_LARGER


class PropagatorRegime(str, Enum):
    """Aging regimes with a closed propagator transform."""
    weak_aging = "weak_aging"
    strong_aging = "strong_aging"


def msd_theory(model, jump, window, mode="exact", small_u_law=False):
    """Mean squared displacement <r^2(t_a, t)> = M2 <n_a(t_a, t)>.

    For a biased lattice walk the drift adds (h c)^2 <n_a (n_a - 1)>, which
    is only available in exact mode.

    Args:
        model (WaitingTimeModel): Waiting-time law.
        jump (JumpModel): Jump-length law.
        window (AgingWindow): Observation window.
        mode (str): "exact" or "asymptotic".
        small_u_law (bool): In exact mode, invert the small-u law.

    Returns:
        float: <r^2(t_a, t)>.
    """
    mean_count = mean_renewals_theory(model, window, mode, small_u_law)
    if jump.mean == 0.:
        return jump.second_moment * mean_count
    if mode != "exact":
        raise ValueError("The asymptotic mean squared displacement requires unbiased jumps.")
    second = moment_renewals_theory(model, window, 2, mode, small_u_law)
    return jump.second_moment * mean_count + jump.mean ** 2 * (second - mean_count)


def _spurious_branch_point(model):
    return (1. + model.lam_alpha) ** (1. / model.alpha) - model.lam


def propagator_theory(model, jump, x, window, regime=PropagatorRegime.weak_aging, n_nodes=32):
    """Propagator P(x, t_a, t) of the walkers that moved, from the
    small-u law, by Talbot inversion in u.

    weak aging: [1 - L(u) (1 * g)(t_a)] / (2u) F1(u, x)
    strong aging: L(u) g(t_a) / (2u^2) F1(u, x)

    Args:
        model (WaitingTimeModel): Waiting-time law.
        jump (JumpModel): Symmetric jump-length law, through M2.
        x (float or array): Position(s).
        window (AgingWindow): Observation window.
        regime (PropagatorRegime): Aging regime of the window.
        n_nodes (int): Talbot nodes.

    Returns:
        float or array: P(x, t_a, t), even in x.

    Raises:
        RegimeError: If the window is not in the requested regime.
    """
    regime = PropagatorRegime(regime)
    if jump.mean != 0.:
        raise ValueError("The propagator transform requires unbiased jumps.")
    cell = classify_regime(model, window)
    holds = cell.weak_aging if regime is PropagatorRegime.weak_aging else cell.strong_aging
    if not holds:
        raise RegimeError(f"The {regime.value} propagator does not hold at t_a = {window.t_a}, t = {window.t} "
                          f"(regime {cell.label}).")

    diffusivity = 0.5 * jump.second_moment
    if regime is PropagatorRegime.weak_aging:
        aged = integrated_renewal_density(model, window.t_a)

        def prefactor(u, exponent):
            return (1. - exponent * aged) / (2. * u)
    else:
        density = g_aux(model, window.t_a)

        def prefactor(u, exponent):
            return exponent * density / (2. * u ** 2)

    def transform(u, position):
        exponent = tempered_exponent(model, u)
        q = np.sqrt(exponent / (diffusivity * (1. - exponent)))
        return prefactor(u, exponent) * q * np.exp(-q * abs(position))

    r = min(0.4 * n_nodes, 0.5 * _spurious_branch_point(model) * window.t)
    values = np.array([inverse_laplace(lambda u: transform(u, xi), window.t, n_nodes, r)
                       for xi in np.atleast_1d(x)])
    return float(values[0]) if np.ndim(x) == 0 else values


def renewal_density_convolution(model, t):
    """(g * g)(t), t^(2 alpha - 1) / Gamma(2 alpha) for lambda = 0."""
    alpha = model.alpha
    if model.lam == 0.:
        return t ** (2. * alpha - 1.) * rgamma(2. * alpha)

    def smooth(tau):
        return tau ** (1. - alpha) * g_aux(model, tau)

    return singular_convolution(smooth, smooth, t, alpha, alpha)


def mean_pair_count_theory(model, t_a, t_b, mode="exact"):
    """Correlation <n_a n_b> of the renewal counts in (0, t_a] and
    (t_a, t_a + t_b].

    Exact mode integrates the pair density g(t1) g(t2 - t1) of the small-u
    law,
    <n_a n_b> = int_0^t_a g(tau) [(1*g)(t_a + t_b - tau) - (1*g)(t_a - tau)] dtau.
    Asymptotic mode returns t_b (g * g)(t_a) for t_b << t_a and
    (1*g)(t_a) (1*g)(t_b) for t_b >> t_a.

    Args:
        model (WaitingTimeModel): Waiting-time law.
        t_a (float): Length of the aging interval, positive.
        t_b (float): Length of the response interval, positive.
        mode (str): "exact" or "asymptotic".

    Returns:
        float: <n_a n_b>.
    """
    if not (t_a > 0. and t_b > 0.):
        raise ValueError(f"Both intervals must be positive, got t_a = {t_a}, t_b = {t_b}.")
    if mode == "exact":
        def integrand(tau):
            return g_aux(model, tau) * (integrated_renewal_density(model, t_a + t_b - tau)
                                        - integrated_renewal_density(model, t_a - tau))
        return quad(integrand, 0., t_a, limit=200, epsabs=0., epsrel=1e-8)[0]
    if mode != "asymptotic":
        raise ValueError(f"Unknown theory mode {mode}, expected 'exact' or 'asymptotic'.")

    ratio = t_b / t_a
    if ratio < MUCH_SMALLER:
        return t_b * renewal_density_convolution(model, t_a)
    if ratio > MUCH_LARGER:
        return integrated_renewal_density(model, t_a) * integrated_renewal_density(model, t_b)
    raise RegimeError(f"No asymptotic form of <n_a n_b> holds at t_b / t_a = {ratio}; use mode='exact'.")


def fluctuation_response_theory(model, t_a, t_b=None):
    """Ratio <n_a n_b> / (<n_a> <n_b>) for t_a >> t_b,
    (g * g)(t_a) / ((1 * g)(t_a) g(t_a)).

    The ratio does not depend on t_b, which is only used to check the
    regime. It equals alpha Gamma(alpha)^2 / Gamma(2 alpha) for lambda = 0
    and tends to one for lambda t_a >> 1. The fluctuation-response factor is
    the ratio minus one.

    Args:
        model (WaitingTimeModel): Waiting-time law.
        t_a (float): Length of the aging interval, positive.
        t_b (float): Length of the response interval.

    Returns:
        float: The correlation ratio.
    """
    if not t_a > 0.:
        raise ValueError(f"Aging interval must be positive, got t_a = {t_a}.")
    if t_b is not None and not t_b / t_a < MUCH_SMALLER:
        raise RegimeError(f"The fluctuation-response ratio requires t_b << t_a, got t_b / t_a = {t_b / t_a}.")
    if model.lam == 0.:
        return model.alpha * gamma(model.alpha) ** 2 / gamma(2. * model.alpha)
    return renewal_density_convolution(model, t_a) / (integrated_renewal_density(model, t_a) * g_aux(model, t_a))
