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

from tempered_actrw.toolboxes.post_processing import mean_and_error, binomial_error, outcome_frequencies, \
    ratio_of_means, bootstrap_error, richardson, observed_order


class StatisticsTest(unittest.TestCase):

    def test_mean_and_error(self):
        """Test the sample mean and standard error."""
        mean, error = mean_and_error([1., 2., 3., 4.])
        self.assertAlmostEqual(mean, 2.5, places=14)
        self.assertAlmostEqual(error, np.std([1., 2., 3., 4.], ddof=1) / 2., places=14)
        self.assertTrue(np.isnan(mean_and_error([1.])[1]))
        self.assertRaises(ValueError, mean_and_error, [])

    def test_binomial_error(self):
        """Test the binomial standard error."""
        self.assertAlmostEqual(binomial_error(0.5, 100), 0.05, places=14)
        self.assertEqual(binomial_error(1., 100), 0.)

    def test_frequencies(self):
        """Test that outcome counts are sorted and sum to the ensemble size."""
        freqs = outcome_frequencies([3, 0, 0, 1, 3, 3])
        self.assertEqual(list(freqs.keys()), [0, 1, 3])
        self.assertEqual(freqs, {0: 2, 1: 1, 3: 3})
        self.assertEqual(sum(freqs.values()), 6)

    def test_bootstrap_ratio(self):
        """Test the bootstrap error of a ratio against the delta method."""
        rng = np.random.default_rng(4)
        x = rng.normal(2., 1., 4000)
        y = rng.normal(4., 1., 4000)
        self.assertAlmostEqual(ratio_of_means(x, y), np.mean(x) / np.mean(y), places=14)
        self.assertAlmostEqual(ratio_of_means(x * y, x, y), np.mean(x * y) / (np.mean(x) * np.mean(y)), places=14)

        error = bootstrap_error(ratio_of_means, [x, y], np.random.default_rng(5), n_resamples=400)
        # Delta method for independent x and y.
        delta = 0.5 * np.sqrt(1. / 4. + 1. / 16.) / np.sqrt(4000.)
        self.assertAlmostEqual(error / delta, 1., delta=0.15)
        self.assertRaises(ValueError, bootstrap_error, ratio_of_means, [x, y[:10]], rng)


class ExtrapolationTest(unittest.TestCase):

    def test_richardson(self):
        """Test exact extrapolation of a polynomial error expansion."""
        steps = np.array([0.4, 0.2, 0.1])
        values = 3. + 2. * steps - 5. * steps**2
        self.assertAlmostEqual(richardson(values, steps), 3., places=10)
        values = 1. + steps**0.5
        self.assertAlmostEqual(richardson(values[:2], steps[:2], order=0.5), 1., places=10)

    def test_observed_order(self):
        """Test the observed order for uniform and non-uniform refinement."""
        for p in [0.6, 1., 2.]:
            steps = np.array([0.4, 0.2, 0.1])
            self.assertAlmostEqual(observed_order(1. + steps**p, steps), p, places=8)
            steps = np.array([0.5, 0.2, 0.1])
            self.assertAlmostEqual(observed_order(1. + steps**p, steps), p, places=8)

    def test_bad_sequences(self):
        """Test that non-monotone sequences and bad steps are rejected."""
        self.assertRaises(ValueError, observed_order, [1., 2., 1.], [0.4, 0.2, 0.1])
        self.assertRaises(ValueError, observed_order, [1., 2., 3.], [0.1, 0.2, 0.4])


if __name__ == "__main__":
    unittest.main()
