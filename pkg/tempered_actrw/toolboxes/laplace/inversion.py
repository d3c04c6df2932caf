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

"""Numerical inverse Laplace transforms.

The fixed Talbot method samples the transform on the deformed contour
p(theta) = (r/t) theta (cot(theta) + i), -pi < theta < pi, which wraps around
the branch cut (-inf, -lambda] of the tempered transforms. With M nodes,
theta_k = k pi / M and

    f(t) ~ (r / (2 M t)) sum_{|k| < M} exp(t p_k) gamma_k F(p_k),
    gamma_k = 1 + i theta_k (1 + cot(theta_k)^2) - i cot(theta_k),  gamma_0 = 1.

For real-symmetric transforms the k and -k terms are complex conjugates and
only the half contour is evaluated. Two-variable transforms are inverted by
nesting: the inner (u) inversion is complex-valued at complex outer nodes s,
so it runs over the full contour.

The Gaver-Stehfest method on the real axis is provided for cross-checks.
"""

from functools import lru_cache
from math import factorial

import numpy as np

from tempered_actrw.helpers.exceptions import ConvergenceError, ContourCollisionError


# Contour scale of both variables in nested inversions. Larger values
# amplify roundoff by exp(r_s + r_u).
NESTED_CONTOUR_SCALE = 6.4
# Outer variable used for the initial-value limit t_a -> 0.
INITIAL_VALUE_S = 1e12


def talbot_nodes(t, n_nodes, r=None, full_contour=False):
    """Nodes and weights of the fixed Talbot rule.

    Args:
        t (float): Time, positive.
        n_nodes (int): Number of nodes M on the half contour.
        r (float): Contour scale. Defaults to 2M/5.
        full_contour (bool): Return the 2M-1 nodes of the full contour, with
            weights such that f(t) = sum w F(p). Otherwise the M nodes of the
            upper half with f(t) = Re sum w F(p).

    Returns:
        (array, array): Complex nodes p and weights w.
    """
    r = 0.4 * n_nodes if r is None else r
    theta = np.arange(1, n_nodes) * np.pi / n_nodes
    cot = 1. / np.tan(theta)
    p = np.concatenate([[r / t], r / t * theta * (cot + 1j)])
    gamma_k = np.concatenate([[1.], 1. + 1j * theta * (1. + cot**2) - 1j * cot])
    weights = r / (n_nodes * t) * np.exp(t * p) * gamma_k
    weights[0] *= 0.5
    if not full_contour:
        return p, weights
    return np.concatenate([p, np.conj(p[1:])]), np.concatenate([weights, np.conj(weights[1:])]) * \
        np.concatenate([[1.], np.full(2 * (n_nodes - 1), 0.5)])


def _check_finite(values, label):
    if not np.all(np.isfinite(values)):
        raise ContourCollisionError(f"Non-finite transform values on the {label} contour: a singularity "
                                    "lies on or to the right of the contour.")


def _talbot_single(transform, t, n_nodes, r):
    p, w = talbot_nodes(t, n_nodes, r)
    # Far-left nodes whose weight underflows carry no information.
    active = w != 0.
    values = np.asarray(transform(p[active]), dtype=complex)
    _check_finite(values, "Talbot")
    return float(np.real(np.sum(w[active] * values)))


def inverse_laplace(transform, t, n_nodes=32, r=None, rtol=1e-6, atol=1e-12, check=True):
    """Invert a real-symmetric Laplace transform with the fixed Talbot method.

    The result is recomputed with twice the nodes on the same contour; if the
    two values differ by more than rtol (relative) plus atol, non-convergence
    is reported.

    Args:
        transform (function): Vectorized F(p) for complex p.
        t (float or array): Positive time(s).
        n_nodes (int): Number of nodes M.
        r (float): Contour scale. Defaults to 2M/5.
        rtol (float): Relative tolerance of the refinement check.
        atol (float): Absolute tolerance of the refinement check.
        check (bool): Perform the refinement check.

    Returns:
        float or array: f(t), from the refined rule when checked.

    Raises:
        ConvergenceError: If doubling the number of nodes changes the result
            beyond tolerance.
    """
    times = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(times <= 0.):
        raise ValueError(f"Inverse Laplace transform requires t > 0, got {np.min(times)}.")
    r = 0.4 * n_nodes if r is None else r

    out = np.empty_like(times)
    for i, ti in enumerate(times):
        value = _talbot_single(transform, ti, n_nodes, r)
        if check:
            refined = _talbot_single(transform, ti, 2 * n_nodes, r)
            if abs(refined - value) > rtol * abs(refined) + atol:
                raise ConvergenceError(f"Talbot inversion at t = {ti} did not converge: {value} with {n_nodes} "
                                       f"nodes, {refined} with {2 * n_nodes} nodes.")
            value = refined
        out[i] = value
    return float(out[0]) if np.ndim(t) == 0 else out


@lru_cache(maxsize=16)
def stehfest_coefficients(n_terms):
    """Gaver-Stehfest weights V_k, k = 1..N, for even N."""
    if n_terms % 2:
        raise ValueError(f"Number of Stehfest terms must be even, got {n_terms}.")
    half = n_terms // 2
    coefficients = np.zeros(n_terms)
    for k in range(1, n_terms + 1):
        total = 0
        for j in range((k + 1) // 2, min(k, half) + 1):
            total += j**half * factorial(2 * j) / (factorial(half - j) * factorial(j) * factorial(j - 1)
                                                   * factorial(k - j) * factorial(2 * j - k))
        coefficients[k - 1] = (-1)**(k + half) * total
    return coefficients


def stehfest_inverse(transform, t, n_terms=14):
    """Invert a Laplace transform from real-axis samples (Gaver-Stehfest).

    Accurate to a few digits for smooth, non-oscillatory f. The weights
    alternate and grow quickly; more than about 16 terms loses precision in
    double arithmetic.

    Args:
        transform (function): Vectorized F(p) for real p > 0.
        t (float or array): Positive time(s).
        n_terms (int): Even number of terms N.

    Returns:
        float or array: f(t).
    """
    times = np.atleast_1d(np.asarray(t, dtype=float))
    v = stehfest_coefficients(n_terms)
    k = np.arange(1, n_terms + 1)
    out = np.array([np.log(2.) / ti * np.sum(v * np.real(transform(k * np.log(2.) / ti))) for ti in times])
    return float(out[0]) if np.ndim(t) == 0 else out


def _nested_talbot(transform2, t_a, t, n_inner, n_outer, r):
    s, w_s = talbot_nodes(t_a, n_outer, r)
    u, w_u = talbot_nodes(t, n_inner, r, full_contour=True)
    s, w_s = s[w_s != 0.], w_s[w_s != 0.]
    u, w_u = u[w_u != 0.], w_u[w_u != 0.]
    values = np.asarray(transform2(s[:, None], u[None, :]), dtype=complex)
    _check_finite(values, "inner")
    inner = values @ w_u
    return float(np.real(np.sum(w_s * inner)))


def _initial_value(transform2, t, n_inner, r):
    s = INITIAL_VALUE_S
    return inverse_laplace(lambda u: s * transform2(s, u), t, n_inner, r, check=False)


def double_inverse_laplace(transform2, t_a, t, n_inner=32, n_outer=48, r=NESTED_CONTOUR_SCALE,
                           rtol=1e-5, atol=1e-9, check=True):
    """Invert a two-variable Laplace transform F2(s, u) at (t_a, t).

    The inner inversion (u -> t) runs over the full Talbot contour at every
    outer node s; the outer inversion (s -> t_a) uses the half contour. At
    t_a = 0 the initial-value limit s F2(s, u), s -> infinity, is inverted
    in u instead.

    Args:
        transform2 (function): Vectorized F2(s, u), broadcasting s against u.
        t_a (float): Aging time, non-negative.
        t (float): Observation time, positive.
        n_inner (int): Nodes of the inner contour.
        n_outer (int): Nodes of the outer contour.
        r (float): Scale of both contours.
        rtol (float): Relative tolerance of the refinement check.
        atol (float): Absolute tolerance of the refinement check.
        check (bool): Recompute with doubled node counts and compare.

    Returns:
        float: f(t_a, t).

    Raises:
        ConvergenceError: If the refinement check fails.
        ContourCollisionError: If the transform is singular on a contour.
    """
    if t_a < 0. or t <= 0.:
        raise ValueError(f"Double inversion requires t_a >= 0 and t > 0, got t_a = {t_a}, t = {t}.")
    if t_a == 0.:
        value = _initial_value(transform2, t, n_inner, r)
        refined = _initial_value(transform2, t, 2 * n_inner, r) if check else value
    else:
        value = _nested_talbot(transform2, t_a, t, n_inner, n_outer, r)
        refined = _nested_talbot(transform2, t_a, t, 2 * n_inner, 2 * n_outer, r) if check else value
    if abs(refined - value) > rtol * abs(refined) + atol:
        raise ConvergenceError(f"Nested Talbot inversion at (t_a, t) = ({t_a}, {t}) did not converge: "
                               f"{value} versus {refined} with doubled nodes.")
    return refined
