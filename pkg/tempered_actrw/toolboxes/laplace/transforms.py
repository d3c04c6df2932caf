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

"""Closed Laplace-domain expressions of the tempered renewal process.

With L(u) = (u + lambda)^alpha - lambda^alpha (principal branch), the
waiting-time transform is phi(u) = exp(-L(u)), and its small-u form is
1 - L(u). The double transform of the forward waiting time, in the aging
time (variable s) and the observation time (variable u), is
omega(s, u) = (phi(s) - phi(u)) / ((1 - phi(s)) (u - s)).

All functions accept numpy arrays and broadcast s against u, as needed by
the nested contour inversion.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import binom, gamma


# Below this relative distance, omega(s, u) is evaluated through the
# derivative of phi.
COINCIDENCE_RTOL = 1e-8


@dataclass
class LaplacePoint:
    """Point of the double Laplace domain.

    Attributes:
        s (complex or array): Variable conjugate to the aging time t_a.
        u (complex or array): Variable conjugate to the observation time t.
    """
    s: complex
    u: complex


def _check_domain(model, u):
    u = np.asarray(u)
    on_cut = (np.imag(u) == 0.) & (np.real(u) < -model.lam)
    if np.any(on_cut):
        raise ValueError(f"Laplace variable u = {u[on_cut].ravel()[0]} lies on the branch cut u < -lambda "
                         f"(lambda = {model.lam}).")


def principal_power(z, a):
    """z^a on the principal branch, with 0^a = 0 for a > 0."""
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        value = np.exp(a * np.log(z))
    return np.where(z == 0., 0. if a > 0. else np.inf, value)


def tempered_exponent(model, u):
    """L(u) = (u + lambda)^alpha - lambda^alpha, computed without cancellation
    for |u| << lambda.

    Args:
        model (WaitingTimeModel): alpha and lambda.
        u (complex or array): Laplace variable.

    Returns:
        complex or array: L(u).
    """
    _check_domain(model, u)
    u = np.asarray(u, dtype=complex)
    if model.lam == 0.:
        return principal_power(u, model.alpha)[()]
    ratio = u / model.lam
    small = np.abs(ratio) < 0.5
    out = np.empty_like(u)
    out[small] = model.lam_alpha * np.expm1(model.alpha * np.log1p(ratio[small]))
    out[~small] = principal_power(u[~small] + model.lam, model.alpha) - model.lam_alpha
    return out if out.ndim else out[()]


def waiting_time_lt(model, u, asymptotic=False):
    """Laplace transform phi(u) of the waiting-time density.

    Args:
        model (WaitingTimeModel): alpha and lambda.
        u (complex or array): Laplace variable, off the branch cut u < -lambda.
        asymptotic (bool): Return the small-u form 1 + lambda^alpha - (u+lambda)^alpha.

    Returns:
        complex or array: phi(u).

    Raises:
        ValueError: If u is real and u < -lambda.
    """
    exponent = tempered_exponent(model, u)
    return 1. - exponent if asymptotic else np.exp(-exponent)


def waiting_time_lt_derivative(model, u, asymptotic=False):
    """Derivative d phi / du of the waiting-time transform."""
    _check_domain(model, u)
    u = np.asarray(u, dtype=complex)
    d_exponent = model.alpha * principal_power(u + model.lam, model.alpha - 1.)
    if asymptotic:
        return -d_exponent
    return -d_exponent * np.exp(-tempered_exponent(model, u))


def forward_waiting_lt(model, point, asymptotic=False):
    """Double Laplace transform omega(s, u) of the forward waiting time.

    Near the removable singularity s = u (relative distance below 1e-8), the
    limit -phi'(s) / (1 - phi(s)) is used.

    Args:
        model (WaitingTimeModel): alpha and lambda.
        point (LaplacePoint): (s, u), scalars or broadcastable arrays.
        asymptotic (bool): Use the small-u waiting-time law, i.e.
            omega = (L(u) - L(s)) / ((u - s) L(s)).

    Returns:
        complex or array: omega(s, u).
    """
    s, u = np.broadcast_arrays(np.asarray(point.s, dtype=complex), np.asarray(point.u, dtype=complex))
    l_s, l_u = tempered_exponent(model, s), tempered_exponent(model, u)

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if asymptotic:
            omega = (l_u - l_s) / ((u - s) * l_s)
            limit = model.alpha * principal_power(s + model.lam, model.alpha - 1.) / l_s
        else:
            # phi(s) - phi(u) = -phi(s) expm1(L(s) - L(u)) when L(s) and L(u) are close
            difference = l_s - l_u
            numerator = np.where(np.abs(difference) < 1.,
                                 -np.exp(-l_s) * np.expm1(difference),
                                 np.exp(-l_s) - np.exp(-l_u))
            one_minus_phi_s = -np.expm1(-l_s)
            omega = numerator / (one_minus_phi_s * (u - s))
            limit = -waiting_time_lt_derivative(model, s) / one_minus_phi_s

    close = np.abs(u - s) < COINCIDENCE_RTOL * (np.abs(u) + np.abs(s))
    omega = np.where(close, limit, omega)
    return omega if omega.ndim else omega[()]


def cumulant_tau(model, n):
    """n-th cumulant of the waiting time, -Gamma(n - alpha) / Gamma(-alpha) lambda^(alpha - n)."""
    return -gamma(n - model.alpha) / gamma(-model.alpha) * model.lam ** (model.alpha - n)


def moment_tau(model, n, exact=False):
    """Waiting-time moment of order n.

    The closed formula -Gamma(n - alpha) / Gamma(-alpha) lambda^(alpha - n)
    is returned by default. It is the mean for n = 1 and the n-th cumulant in
    general; with exact=True the raw moment <tau^n> of the tempered law is
    assembled from the cumulants.

    Args:
        model (WaitingTimeModel): alpha and lambda > 0.
        n (int): Order, positive.
        exact (bool): Return the raw moment.

    Returns:
        float: Moment of order n.

    Raises:
        ValueError: If lambda = 0 (all moments diverge) or n < 1.
    """
    if model.lam == 0.:
        raise ValueError("Waiting-time moments diverge for lambda = 0.")
    if int(n) != n or n < 1:
        raise ValueError(f"Moment order must be a positive integer, got {n}.")
    n = int(n)
    if not exact:
        return cumulant_tau(model, n)

    moments = [1.]
    for order in range(1, n + 1):
        moments.append(sum(binom(order - 1, k) * cumulant_tau(model, k + 1) * moments[order - 1 - k]
                           for k in range(order)))
    return moments[n]


def mean_waiting_time(model):
    """<tau> = alpha lambda^(alpha - 1)."""
    return moment_tau(model, 1)
