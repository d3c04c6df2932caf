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

"""Upper incomplete gamma function Gamma(a, x) = int_x^inf exp(-t) t^(a-1) dt
for any real a, including the negative non-integer values Gamma(-alpha, x)
appearing in the tempered waiting-time tail.
"""

import numpy as np
from scipy.special import exp1, gamma, gammaincc


def upper_incomplete_gamma(a, x):
    """Upper incomplete gamma function Gamma(a, x).

    For a > 0 it is the regularized scipy value times Gamma(a); a = 0 is the
    exponential integral E1(x). Negative a is reached from the first
    non-negative a + m by the downward recurrence
    Gamma(a, x) = (Gamma(a + 1, x) - x^a exp(-x)) / a.

    Args:
        a (float): First argument, any real number.
        x (float or array): Lower integration limit. x = 0 is allowed when
            a > 0 and returns the complete gamma function.

    Returns:
        float or array: Gamma(a, x), same shape as x.

    Raises:
        ValueError: If x < 0, or x = 0 with a <= 0 (divergent integral).
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0.):
        raise ValueError(f"Upper incomplete gamma requires x >= 0, got {np.min(x_arr)}.")
    if a <= 0. and np.any(x_arr == 0.):
        raise ValueError(f"Gamma({a}, 0) diverges for non-positive a.")

    if a > 0.:
        return gammaincc(a, x_arr) * gamma(a)

    n_steps = int(np.ceil(-a))
    a_start = a + n_steps
    if a_start == 0.:
        value = exp1(x_arr)
    else:
        value = gammaincc(a_start, x_arr) * gamma(a_start)

    for step in range(n_steps):
        a_current = a_start - step - 1
        value = (value - x_arr ** a_current * np.exp(-x_arr)) / a_current
    return value
