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

import unittest
from math import gamma

import numpy as np
from scipy.special import binom

from tempered_actrw.algorithms.fokker_planck import grunwald_weights, gl_tempered_weights, tempered_derivative


class GrunwaldWeightsTest(unittest.TestCase):

    def test_first_weights(self):
        """Test w_0 = 1 and w_1 = -alpha exp(-lambda dt)."""
        weights = gl_tempered_weights(0.5, 0., 0.1, 5)
        self.assertEqual(weights[0], 1.)
        self.assertEqual(weights[1], -0.5)

        weights = gl_tempered_weights(0.6, 2., 0.01, 5)
        self.assertAlmostEqual(weights[1], -0.6 * np.exp(-0.02), places=14)

    def test_binomial_coefficients(self):
        """Test the untempered weights against (-1)^j binom(alpha, j)."""
        j = np.arange(51)
        reference = (-1.) ** j * binom(0.6, j)
        np.testing.assert_allclose(grunwald_weights(0.6, 50), reference, rtol=1e-10, atol=0.)

    def test_untempered_limit(self):
        """Test that lambda = 0 returns the classical weights bitwise, whatever dt."""
        classical = grunwald_weights(0.7, 50)
        np.testing.assert_array_equal(gl_tempered_weights(0.7, 0., 0.1, 50), classical)
        np.testing.assert_array_equal(gl_tempered_weights(0.7, 0., 3., 50), classical)

    def test_tempering_factor(self):
        """Test that the tempering multiplies w_j by exp(-lambda j dt)."""
        weights = gl_tempered_weights(0.4, 0.5, 0.2, 30)
        factors = np.exp(-0.1 * np.arange(31))
        np.testing.assert_allclose(weights, grunwald_weights(0.4, 30) * factors, rtol=1e-14)

    def test_partial_sum(self):
        """Test that the untempered partial sums decay to zero."""
        self.assertLess(abs(np.sum(gl_tempered_weights(0.6, 0., 1., 10**4))), 1e-2)

    def test_derivative_of_ramp(self):
        """Test the tempered derivative of exp(-lambda t) t against
        exp(-lambda t) t^(1-alpha) / Gamma(2 - alpha).
        """
        alpha, lam, dt = 0.6, 0.5, 1e-3
        t = dt * np.arange(1001)
        y = np.exp(-lam * t) * t
        unshifted = tempered_derivative(y, alpha, lam, dt) + lam ** alpha * y
        expected = np.exp(-lam) / gamma(2. - alpha)
        self.assertAlmostEqual(unshifted[-1] / expected, 1., delta=1e-2)

    def test_domain(self):
        """Test that invalid orders and steps are rejected."""
        self.assertRaises(ValueError, gl_tempered_weights, 1.2, 0., 0.1, 10)
        self.assertRaises(ValueError, gl_tempered_weights, 0.5, 0., 0., 10)
        self.assertRaises(ValueError, gl_tempered_weights, 0.5, -1., 0.1, 10)


if __name__ == "__main__":
    unittest.main()
