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

"""This file provides quadrature utilities for the weakly singular integrals
appearing in aging renewal theory (convolutions such as g*1 and g*g, where
g(z) ~ z^(alpha-1) near the origin).

The singular endpoint is removed by a graded change of variables matching the
singularity exponent, after which Gauss-Legendre rules are refined by doubling
the number of nodes until two successive estimates agree.
"""

from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from tempered_actrw.helpers.exceptions import ConvergenceError


@lru_cache(maxsize=32)
def _legendre_unit_interval(n_nodes):
    """Gauss-Legendre nodes and weights mapped onto [0, 1]."""
    x, w = roots_legendre(n_nodes)
    return 0.5 * (x + 1.), 0.5 * w


def _refine(estimate, atol, rtol, n_start, n_max, label):
    """Double the number of nodes until two successive estimates agree.

    Args:
        estimate (function): Maps a number of nodes to an integral estimate.
        atol (float): Absolute tolerance.
        rtol (float): Relative tolerance.
        n_start (int): Initial number of nodes.
        n_max (int): Maximal number of nodes.
        label (str): Name of the integral, used in error messages.

    Returns:
        float: Converged estimate.

    Raises:
        ConvergenceError: If n_max nodes are reached without agreement.
    """
    n = n_start
    previous = estimate(n)
    while n < n_max:
        n *= 2
        current = estimate(n)
        if abs(current - previous) <= atol + rtol * abs(current):
            return current
        previous = current
    raise ConvergenceError(f"Quadrature of {label} did not converge with {n_max} nodes "
                           f"(last two estimates {previous} and {current}).")


def graded_integral(func, upper, exponent, atol=1e-8, rtol=1e-10, n_start=32, n_max=2048):
    """Compute int_0^upper tau^(exponent-1) func(tau) dtau for a smooth,
    vectorized func and 0 < exponent <= 1.

    The substitution tau = upper * v^(1/exponent) absorbs the algebraic
    singularity, leaving a smooth integrand on [0, 1].

    Args:
        func (function): Vectorized function of tau.
        upper (float): Upper integration limit (>= 0).
        exponent (float): Singularity exponent, in (0, 1].
        atol (float): Absolute tolerance.
        rtol (float): Relative tolerance.

    Returns:
        float: Value of the integral.
    """
    if not 0. < exponent <= 1.:
        raise ValueError(f"Singularity exponent must lie in (0, 1], got {exponent}.")
    if upper < 0.:
        raise ValueError(f"Upper integration limit must be non-negative, got {upper}.")
    if upper == 0.:
        return 0.

    def estimate(n):
        v, w = _legendre_unit_interval(n)
        tau = upper * v ** (1. / exponent)
        return upper ** exponent / exponent * np.dot(w, func(tau))

    return _refine(estimate, atol, rtol, n_start, n_max, "a weakly singular integral")


def singular_convolution(f, g, t, f_exponent=1., g_exponent=1., atol=1e-8, rtol=1e-10):
    """Compute the convolution
    int_0^t tau^(a-1) f(tau) (t-tau)^(b-1) g(t-tau) dtau,
    with a = f_exponent and b = g_exponent, for smooth vectorized f and g.

    The interval is split at t/2 and each half is integrated with the graded
    rule anchored at its singular end.

    Args:
        f (function): Smooth part of the first factor.
        g (function): Smooth part of the second factor.
        t (float): Convolution time.
        f_exponent (float): Exponent a of the first factor.
        g_exponent (float): Exponent b of the second factor.

    Returns:
        float: Value of the convolution at t.
    """
    if t == 0.:
        return 0.
    half = 0.5 * t

    def left(tau):
        return f(tau) * (t - tau) ** (g_exponent - 1.) * g(t - tau)

    def right(sigma):
        return g(sigma) * (t - sigma) ** (f_exponent - 1.) * f(t - sigma)

    return (graded_integral(left, half, f_exponent, atol, rtol)
            + graded_integral(right, half, g_exponent, atol, rtol))


def peaked_integral(func, upper, width, atol=1e-8, rtol=1e-10, n_start=32, n_max=2048):
    """Compute int_0^upper func(sigma) dsigma when func is concentrated near
    sigma = 0 on a scale `width` (e.g. (sigma + t)^(-alpha-1) with small t).

    The logarithmic substitution sigma = width (exp(y) - 1) spreads the peak
    over the integration variable.

    Args:
        func (function): Vectorized integrand.
        upper (float): Upper integration limit (>= 0).
        width (float): Peak width (> 0).

    Returns:
        float: Value of the integral.
    """
    if width <= 0.:
        raise ValueError(f"Peak width must be positive, got {width}.")
    if upper <= 0.:
        return 0.
    y_max = np.log1p(upper / width)

    def estimate(n):
        v, w = _legendre_unit_interval(n)
        y = y_max * v
        sigma = width * np.expm1(y)
        return y_max * np.dot(w, func(sigma) * (sigma + width))

    return _refine(estimate, atol, rtol, n_start, n_max, "a peaked integral")
