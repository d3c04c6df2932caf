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

import mpmath
import numpy as np

from tempered_actrw.toolboxes.sampling import WaitingTimeModel
from tempered_actrw.toolboxes.laplace import LaplacePoint, tempered_exponent, waiting_time_lt, \
    waiting_time_lt_derivative, forward_waiting_lt, cumulant_tau, moment_tau, mean_waiting_time


class WaitingTimeTransformTest(unittest.TestCase):

    def test_normalization(self):
        """Test phi(0) = 1 with and without tempering."""
        for lam in [0., 1e-4, 0.1, 10.]:
            phi = waiting_time_lt(WaitingTimeModel(0.6, lam), 0.)
            self.assertAlmostEqual(abs(phi), 1., delta=1e-12)

    def test_value(self):
        """Test phi(1) for alpha = 0.6, lambda = 0.1."""
        phi = waiting_time_lt(WaitingTimeModel(0.6, 0.1), 1.)
        self.assertAlmostEqual(phi.real, np.exp(0.1**0.6 - 1.1**0.6), places=14)
        self.assertAlmostEqual(phi.real, 0.44589, delta=1e-5)
        self.assertAlmostEqual(phi.imag, 0., places=14)

    def test_small_u_expansion(self):
        """Test that the asymptotic form is 1 - <tau> u + O(u^2)."""
        model = WaitingTimeModel(0.6, 0.1)
        u = 1e-3
        slope = (1. - waiting_time_lt(model, u, asymptotic=True).real) / u
        self.assertAlmostEqual(slope, 1.507132, delta=5e-3)
        self.assertAlmostEqual(mean_waiting_time(model), 1.507132, delta=1e-6)

    def test_small_u_cancellation(self):
        """Test that L(u) keeps full relative accuracy for |u| << lambda."""
        model = WaitingTimeModel(0.6, 0.1)
        u = 1e-12
        self.assertAlmostEqual(tempered_exponent(model, u).real / u, 1.507132, delta=1e-6)

    def test_derivative(self):
        """Test phi'(u) against a central difference."""
        model = WaitingTimeModel(0.6, 0.1)
        u, h = 0.7 + 0.3j, 1e-5
        numerical = (waiting_time_lt(model, u + h) - waiting_time_lt(model, u - h)) / (2. * h)
        self.assertAlmostEqual(abs(waiting_time_lt_derivative(model, u) - numerical), 0., delta=1e-9)

    def test_arrays(self):
        """Test broadcasting over complex arrays."""
        model = WaitingTimeModel(0.6, 0.1)
        u = np.array([0., 1., 2. + 3.j, -0.05])
        phi = waiting_time_lt(model, u)
        self.assertEqual(phi.shape, (4,))
        self.assertAlmostEqual(phi[1].real, 0.44589, delta=1e-5)
        self.assertGreater(phi[3].real, 1.)

    def test_branch_cut(self):
        """Test that real u < -lambda is rejected."""
        self.assertRaises(ValueError, waiting_time_lt, WaitingTimeModel(0.6, 0.1), -0.5)
        self.assertRaises(ValueError, waiting_time_lt, WaitingTimeModel(0.6, 0.), np.array([1., -1e-3]))


class MomentTest(unittest.TestCase):

    def test_mean(self):
        """Test <tau> = alpha lambda^(alpha - 1)."""
        self.assertAlmostEqual(moment_tau(WaitingTimeModel(0.6, 0.1), 1), 1.507132, delta=1e-6)
        self.assertAlmostEqual(moment_tau(WaitingTimeModel(0.6, 1e-4), 1), 23.8864, delta=1e-4)

    def test_second_order(self):
        """Test the second cumulant and raw moment against derivatives of phi at 0."""
        model = WaitingTimeModel(0.6, 0.1)
        h = 1e-3
        phi = [waiting_time_lt(model, u).real for u in [-h, 0., h]]
        second_derivative = (phi[0] - 2. * phi[1] + phi[2]) / h**2
        self.assertAlmostEqual(moment_tau(model, 2), 0.24 * 0.1**-1.4, places=10)
        self.assertAlmostEqual(moment_tau(model, 2, exact=True), second_derivative, delta=1e-3)
        self.assertAlmostEqual(moment_tau(model, 2, exact=True),
                               cumulant_tau(model, 2) + cumulant_tau(model, 1)**2, places=10)

    def test_domain(self):
        """Test that diverging or invalid orders are rejected."""
        self.assertRaises(ValueError, moment_tau, WaitingTimeModel(0.6, 0.), 1)
        self.assertRaises(ValueError, moment_tau, WaitingTimeModel(0.6, 0.1), 0)
        self.assertRaises(ValueError, moment_tau, WaitingTimeModel(0.6, 0.1), 1.5)


class ForwardWaitingTransformTest(unittest.TestCase):

    def test_closed_form(self):
        """Test omega(s, u) at lambda = 0 against a high-precision evaluation."""
        with mpmath.workdps(30):
            phi_2, phi_3 = mpmath.exp(-mpmath.mpf(2)**0.6), mpmath.exp(-mpmath.mpf(3)**0.6)
            expected = float((phi_2 - phi_3) / (1 - phi_2))
        omega = forward_waiting_lt(WaitingTimeModel(0.6, 0.), LaplacePoint(2., 3.))
        self.assertAlmostEqual(omega.real, expected, places=12)

    def test_large_s(self):
        """Test omega ~ phi(u) / s for s -> infinity."""
        model = WaitingTimeModel(0.6, 0.01)
        s = 1e6
        for u in [1e-4, 1.]:
            omega = forward_waiting_lt(model, LaplacePoint(s, u)).real
            self.assertAlmostEqual(s * omega, waiting_time_lt(model, u).real, delta=1e-5)
        self.assertAlmostEqual(forward_waiting_lt(model, LaplacePoint(s, 1e-4)).real, 1e-6, delta=1e-9)

    def test_coincident_points(self):
        """Test that s = u is finite and equals the symmetric average around it."""
        model = WaitingTimeModel(0.6, 0.1)
        s, eps = 1., 1e-5
        limit = forward_waiting_lt(model, LaplacePoint(s, s))
        self.assertTrue(np.isfinite(limit))
        average = 0.5 * (forward_waiting_lt(model, LaplacePoint(s, s + eps))
                         + forward_waiting_lt(model, LaplacePoint(s, s - eps)))
        self.assertAlmostEqual(abs(limit - average), 0., delta=1e-9)

    def test_positivity(self):
        """Test that omega is positive on the positive real quadrant."""
        for lam in [0., 1e-4, 0.1]:
            model = WaitingTimeModel(0.6, lam)
            grid = np.logspace(-4, 3, 15)
            for asymptotic in [False, True]:
                omega = forward_waiting_lt(model, LaplacePoint(grid[:, None], grid[None, :]), asymptotic)
                self.assertEqual(omega.shape, (15, 15))
                self.assertTrue(np.all(omega.real > 0.))

    def test_asymptotic_form(self):
        """Test that the small-u law matches the exact omega for small s and u."""
        model = WaitingTimeModel(0.6, 0.1)
        point = LaplacePoint(1e-5, 2e-5)
        exact = forward_waiting_lt(model, point).real
        asymptotic = forward_waiting_lt(model, point, asymptotic=True).real
        self.assertAlmostEqual(asymptotic / exact, 1., delta=1e-3)


if __name__ == "__main__":
    unittest.main()
