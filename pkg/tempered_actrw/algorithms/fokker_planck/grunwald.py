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

"""Grunwald-Letnikov weights of the tempered fractional derivative
exp(-lambda t) D^alpha (exp(lambda t) y), on a uniform time grid t_k = k dt:

    exp(-lambda t_k) D^alpha (exp(lambda t) y)(t_k) ~ dt^(-alpha) sum_{j<=k} w_j y_{k-j},
    w_j = (-1)^j binom(alpha, j) exp(-lambda j dt).

The untempered weights follow the recursion w_j = w_{j-1} (1 - (1 + alpha) / j),
and the tempering multiplies them by exp(-lambda j dt), so that lambda = 0
returns the classical weights unchanged.
"""

import numpy as np


def grunwald_weights(alpha, n):
    """Classical Grunwald-Letnikov weights (-1)^j binom(alpha, j), j = 0..n.

    Args:
        alpha (float): Order of the derivative, in (0, 1).
        n (int): Index of the last weight.

    Returns:
        array: The n + 1 weights.
    """
    if not 0. < alpha < 1.:
        raise ValueError(f"Derivative order alpha must lie in (0, 1), got {alpha}.")
    if n < 0:
        raise ValueError(f"Number of weights must be non-negative, got {n}.")

    factors = np.ones(n + 1)
    factors[1:] = 1. - (1. + alpha) / np.arange(1, n + 1)
    return np.cumprod(factors)


def gl_tempered_weights(alpha, lam, dt, n):
    """Tempered Grunwald-Letnikov weights (-1)^j binom(alpha, j) exp(-lambda j dt).

    The lambda^alpha shift of the tempered operator is left to the caller.

    Args:
        alpha (float): Order of the derivative, in (0, 1).
        lam (float): Tempering rate, non-negative.
        dt (float): Time step, positive.
        n (int): Index of the last weight.

    Returns:
        array: The n + 1 weights, w_0 = 1.
    """
    if not dt > 0.:
        raise ValueError(f"Time step must be positive, got {dt}.")
    if not lam >= 0.:
        raise ValueError(f"Tempering rate lambda must be non-negative, got {lam}.")

    weights = grunwald_weights(alpha, n)
    if lam == 0.:
        return weights
    return weights * np.exp(-lam * dt * np.arange(n + 1))


def tempered_derivative(y, alpha, lam, dt):
    """Apply the discrete tempered operator
    dt^(-alpha) sum_j w_j y_{k-j} - lambda^alpha y_k to samples y_k = y(k dt).

    Args:
        y (array): Samples on the uniform grid, y[0] at t = 0.
        alpha (float): Order of the derivative, in (0, 1).
        lam (float): Tempering rate, non-negative.
        dt (float): Time step, positive.

    Returns:
        array: Tempered derivative at each grid time.
    """
    y = np.asarray(y, dtype=float)
    weights = gl_tempered_weights(alpha, lam, dt, len(y) - 1)
    convolution = np.convolve(weights, y)[:len(y)]
    return dt ** (-alpha) * convolution - lam ** alpha * y
