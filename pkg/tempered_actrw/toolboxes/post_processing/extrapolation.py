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

import numpy as np
import scipy.optimize as sp


def richardson(values, steps, order=1.):
    """Richardson extrapolation of a sequence computed at several step
    sizes, assuming an error expansion in powers of step^order.

    Args:
        values (array-like): Quantities computed at each step size.
        steps (array-like): Step sizes, distinct and positive.
        order (float): Leading error exponent.

    Returns:
        float: Extrapolated value at zero step size.
    """
    values = np.array(values, dtype=float)
    ck = np.array(steps, dtype=float) ** order
    # Lagrange interpolation in step^order, evaluated at zero.
    x = np.array([np.prod(cj / (cj - c)) for i, c in enumerate(ck) for cj in [np.delete(ck, i)]])
    return float(np.dot(values, x))


def observed_order(values, steps):
    """Convergence order estimated from three computations at decreasing
    step sizes h1 > h2 > h3, solving
    (v1 - v2) / (v2 - v3) = (h1^p - h2^p) / (h2^p - h3^p) for p.

    Args:
        values (array-like): Three computed quantities.
        steps (array-like): The three step sizes, decreasing.

    Returns:
        float: Observed order p.

    Raises:
        ValueError: If the differences are not monotone (no asymptotic
            convergence).
    """
    v1, v2, v3 = values
    h1, h2, h3 = steps
    if not h1 > h2 > h3 > 0.:
        raise ValueError(f"Step sizes must be positive and decreasing, got {steps}.")
    ratio = (v1 - v2) / (v2 - v3)
    if not np.isfinite(ratio) or ratio <= 0.:
        raise ValueError(f"Non-monotone sequence {values}: observed order undefined.")

    # Equal refinement ratios have a closed form.
    if np.isclose(h1 / h2, h2 / h3):
        return float(np.log(ratio) / np.log(h1 / h2))

    def mismatch(p):
        return (h1**p - h2**p) / (h2**p - h3**p) - ratio
    return float(sp.brentq(mismatch, 1e-3, 20.))
