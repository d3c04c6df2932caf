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

import numpy as np

from tempered_actrw.helpers.exceptions import SimulationCapError
from tempered_actrw.toolboxes.sampling import WaitingTimeModel
from tempered_actrw.algorithms.renewal import AgingWindow, EnsembleResult, renewal_epochs, renewal_counts, \
    simulate_renewal_count, count_ensemble, ensemble_moment, survival_probability_mc, mean_renewals_theory, \
    survival_probability_theory


class AgingWindowTest(unittest.TestCase):

    def test_validation(self):
        """Test the domain of the observation window."""
        self.assertRaises(ValueError, AgingWindow, -1., 1.)
        self.assertRaises(ValueError, AgingWindow, 1., 0.)
        self.assertEqual(AgingWindow(2., 3.).end, 5.)

    def test_histogram_total(self):
        """Test that a histogram must account for every trajectory."""
        self.assertRaises(ValueError, EnsembleResult, 10, 0, 1., 0.1, {0: 4, 1: 5})
        result = EnsembleResult.from_samples(np.array([0., 1., 1., 4.]), 3, outcomes=[0, 1, 1, 2])
        self.assertEqual(result.raw_histogram, {0: 1, 1: 2, 2: 1})
        self.assertAlmostEqual(result.estimate, 1.5, places=12)


class RenewalSimulationTest(unittest.TestCase):

    def test_epochs(self):
        """Test that epochs are increasing and bounded by the horizon."""
        model = WaitingTimeModel(0.6, 0.1)
        epochs = renewal_epochs(model, 500., np.random.default_rng(1))
        self.assertTrue(np.all(np.diff(epochs) > 0.))
        self.assertLessEqual(epochs[-1], 500.)
        self.assertGreater(len(epochs), 100)

    def test_counts_match_epochs(self):
        """Test that counts on a grid use the window (t_a, t_a + t]."""
        model = WaitingTimeModel(0.6, 0.1)
        epochs = renewal_epochs(model, 130., np.random.default_rng(4))
        counts = renewal_counts(model, 30., [1., 50., 100.], np.random.default_rng(4))
        expected = [np.sum((epochs > 30.) & (epochs <= 30. + t)) for t in [1., 50., 100.]]
        np.testing.assert_array_equal(counts, expected)
        self.assertTrue(np.all(np.diff(counts) >= 0))

    def test_iteration_cap(self):
        """Test that pathological parameters hit the renewal cap."""
        model = WaitingTimeModel(0.6, 10.)
        self.assertRaises(SimulationCapError, simulate_renewal_count, model, AgingWindow(0., 1e6),
                          np.random.default_rng(0), 1000)

    def test_empty_window(self):
        """Test that a vanishing window contains no renewal."""
        model = WaitingTimeModel(0.6, 1e-2)
        self.assertEqual(simulate_renewal_count(model, AgingWindow(10., 1e-12), np.random.default_rng(2)), 0)
        result = survival_probability_mc(model, AgingWindow(10., 1e-9), 200, seed=5, n_workers=1)
        self.assertEqual(result.estimate, 1.)
        self.assertEqual(result.std_error, 0.)

    def test_long_time_mean(self):
        """Test the non-aged mean count against t / <tau> and the exact theory."""
        model = WaitingTimeModel(0.6, 0.1)
        window = AgingWindow(0., 100.)
        result = ensemble_moment(model, window, 1, 2000, seed=11, n_workers=1)
        self.assertAlmostEqual(result.estimate / 66.35, 1., delta=0.03)
        self.assertAlmostEqual(result.estimate, mean_renewals_theory(model, window), delta=4. * result.std_error)
        self.assertEqual(sum(result.raw_histogram.values()), 2000)

    def test_strong_aging_mean(self):
        """Test that the strongly aged mean count approaches t g(t_a)."""
        model = WaitingTimeModel(0.6, 1e-8)
        window = AgingWindow(1000., 5.)
        result = ensemble_moment(model, window, 1, 4000, seed=7, n_workers=1)
        self.assertAlmostEqual(result.estimate, mean_renewals_theory(model, window), delta=4. * result.std_error)
        self.assertAlmostEqual(mean_renewals_theory(model, window, "asymptotic"), 0.212, delta=0.002)

    def test_survival_against_theory(self):
        """Test the Monte Carlo survival probability against its exact inversion."""
        model = WaitingTimeModel(0.6, 1e-2)
        window = AgingWindow(100., 10.)
        result = survival_probability_mc(model, window, 4000, seed=3, n_workers=1)
        self.assertAlmostEqual(result.estimate, survival_probability_theory(model, window),
                               delta=4. * result.std_error)

    def test_worker_independence(self):
        """Test that the ensemble does not depend on the worker count."""
        model = WaitingTimeModel(0.6, 1e-2)
        serial = count_ensemble(model, 20., [5., 50.], 300, seed=8, n_workers=1)
        parallel = count_ensemble(model, 20., [5., 50.], 300, seed=8, n_workers=2)
        self.assertEqual(serial.shape, (300, 2))
        np.testing.assert_array_equal(serial, parallel)

    def test_moment_order(self):
        """Test the domain of the moment order."""
        self.assertRaises(ValueError, ensemble_moment, WaitingTimeModel(0.6, 0.1), AgingWindow(0., 1.), 0., 10, 1)


if __name__ == "__main__":
    unittest.main()
