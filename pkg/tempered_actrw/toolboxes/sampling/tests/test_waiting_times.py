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
from scipy.integrate import quad
from scipy.stats import ks_2samp

from tempered_actrw.toolboxes.sampling import WaitingTimeModel, TemperedWaitingSampler, SamplerStrategy, \
    sample_one_sided_stable, sample_tempered_waiting, one_sided_stable_pdf, one_sided_stable_cdf, \
    tempered_waiting_pdf, powerlaw_envelope
from tempered_actrw.toolboxes.sampling.waiting_times import _stable_pdf_series, _stable_pdf_integral, \
    _stable_series_threshold


def assert_transform(test, samples, u, expected, n_sigma=4.):
    """Empirical Laplace transform within n_sigma standard errors."""
    values = np.exp(-u * samples)
    std_error = np.std(values, ddof=1) / np.sqrt(len(values))
    test.assertLess(abs(np.mean(values) - expected), n_sigma * std_error + 1e-12)


class OneSidedStableTest(unittest.TestCase):

    def test_laplace_transform(self):
        """Test that Kanter variates have Laplace transform exp(-u^alpha)."""
        x = sample_one_sided_stable(0.6, np.random.default_rng(3), 200000)
        assert_transform(self, x, 1., np.exp(-1.))
        assert_transform(self, x, 2., 0.21962)
        self.assertTrue(np.all(x > 0.))

    def test_single_draw(self):
        """Test that size=None returns one float."""
        self.assertIsInstance(float(sample_one_sided_stable(0.6, np.random.default_rng(0))), float)

    def test_median_near_one(self):
        """Test that the median approaches 1 as alpha approaches 1."""
        x = sample_one_sided_stable(0.99, np.random.default_rng(5), 20000)
        self.assertAlmostEqual(np.median(x), 1., delta=0.05)
        self.assertAlmostEqual(one_sided_stable_cdf(0.99, 1.), 0.5, delta=0.05)

    def test_density(self):
        """Test normalization of the density and continuity of its two representations."""
        alpha = 0.6
        total = quad(lambda x: one_sided_stable_pdf(alpha, x), 0., 1., limit=200)[0] \
            + quad(lambda x: one_sided_stable_pdf(alpha, x), 1., np.inf, limit=200)[0]
        self.assertAlmostEqual(total, 1., delta=1e-6)
        x_switch = _stable_series_threshold(alpha)
        self.assertAlmostEqual(_stable_pdf_series(alpha, x_switch) / _stable_pdf_integral(alpha, x_switch), 1.,
                               delta=1e-6)

    def test_cdf_against_samples(self):
        """Test the distribution function against the empirical one."""
        x = sample_one_sided_stable(0.6, np.random.default_rng(11), 50000)
        for q in [0.5, 1., 4.]:
            self.assertAlmostEqual(np.mean(x <= q), one_sided_stable_cdf(0.6, q), delta=0.01)

    def test_bad_alpha(self):
        """Test the domain of the stable index."""
        self.assertRaises(ValueError, sample_one_sided_stable, 1., np.random.default_rng(0))


class TemperedWaitingTest(unittest.TestCase):

    def test_model_validation(self):
        """Test parameter domains of the waiting-time law."""
        self.assertRaises(ValueError, WaitingTimeModel, 1.2, 0.1)
        self.assertRaises(ValueError, WaitingTimeModel, 0.6, -0.1)
        self.assertRaises(ValueError, WaitingTimeModel, 0.6, 0.1, "unknown")
        self.assertRaises(ValueError, WaitingTimeModel, 0.6, 0.1, "powerlaw_envelope", 0.)
        model = WaitingTimeModel(0.6, 0.1, "powerlaw_envelope")
        self.assertIs(model.strategy, SamplerStrategy.powerlaw_envelope)

    def test_laplace_transform(self):
        """Test the exponential tilt sampler through its Laplace transform."""
        for lam in [0., 1e-2, 0.1, 10.]:
            model = WaitingTimeModel(0.6, lam)
            x = sample_tempered_waiting(model, np.random.default_rng(7), 100000)
            for u in [0.5, 1., 2.]:
                assert_transform(self, x, u, np.exp(lam**0.6 - (u + lam)**0.6))

    def test_acceptance_rate(self):
        """Test that the tilt acceptance rate is exp(-lambda^alpha)."""
        sampler = TemperedWaitingSampler(WaitingTimeModel(0.6, 0.1))
        sampler.sample(np.random.default_rng(1), 200000)
        expected = np.exp(-0.1**0.6)
        self.assertAlmostEqual(expected, 0.77787, delta=1e-5)
        std_error = np.sqrt(expected * (1. - expected) / sampler.n_proposed)
        self.assertAlmostEqual(sampler.acceptance_rate, expected, delta=4. * std_error)

    def test_mean_waiting_time(self):
        """Test the sample mean against alpha lambda^(alpha-1)."""
        x = sample_tempered_waiting(WaitingTimeModel(0.6, 0.1), np.random.default_rng(2), 200000)
        std_error = np.std(x, ddof=1) / np.sqrt(len(x))
        self.assertAlmostEqual(np.mean(x), 1.507132, delta=4. * std_error)

    def test_tempered_density_normalization(self):
        """Test that phi integrates to one."""
        model = WaitingTimeModel(0.6, 0.1)
        total = quad(lambda t: tempered_waiting_pdf(model, t), 0., 1., limit=200)[0] \
            + quad(lambda t: tempered_waiting_pdf(model, t), 1., np.inf, limit=200)[0]
        self.assertAlmostEqual(total, 1., delta=1e-6)

    def test_envelope_strategy(self):
        """Test the power-law envelope sampler and its bound."""
        model = WaitingTimeModel(0.6, 0.1, "powerlaw_envelope", 1e-3)
        envelope = powerlaw_envelope(model)
        x_grid = np.logspace(-3, 3, 500)
        self.assertTrue(np.all(envelope.ratio(model, x_grid) <= envelope.bound * (1. + 1e-9)))
        x = sample_tempered_waiting(model, np.random.default_rng(4), 50000)
        self.assertTrue(np.all(x >= 1e-3))
        for u in [0.5, 1., 2.]:
            assert_transform(self, x, u, np.exp(0.1**0.6 - (u + 0.1)**0.6))

    def test_strategy_equivalence(self):
        """Test that both strategies give the same distribution (two-sample KS)."""
        tilt = sample_tempered_waiting(WaitingTimeModel(0.6, 0.1), np.random.default_rng(8), 20000)
        envelope = sample_tempered_waiting(WaitingTimeModel(0.6, 0.1, "powerlaw_envelope"),
                                           np.random.default_rng(9), 20000)
        self.assertGreater(ks_2samp(tilt, envelope).pvalue, 1e-3)

    def test_untempered_tail(self):
        """Test that lambda = 0 gives a survival function with tail exponent -alpha."""
        for strategy in SamplerStrategy:
            model = WaitingTimeModel(0.6, 0., strategy)
            x = np.sort(sample_tempered_waiting(model, np.random.default_rng(10), 200000))
            t = np.logspace(1.5, 3.5, 9)
            survival = 1. - np.searchsorted(x, t) / len(x)
            slope = np.polyfit(np.log(t), np.log(survival), 1)[0]
            self.assertAlmostEqual(slope, -0.6, delta=0.03)

    def test_determinism(self):
        """Test that identical seeds give identical streams."""
        model = WaitingTimeModel(0.6, 0.1)
        a = sample_tempered_waiting(model, np.random.default_rng(123), 1000)
        b = sample_tempered_waiting(model, np.random.default_rng(123), 1000)
        np.testing.assert_array_equal(a, b)

    def test_maximum_decreases_with_tempering(self):
        """Test that the maximum of 100 draws decreases with lambda."""
        rng = np.random.default_rng(12)
        medians = []
        for lam in [1e-5, 1e-3, 1e-1, 10.]:
            model = WaitingTimeModel(0.6, lam)
            maxima = [np.max(sample_tempered_waiting(model, rng, 100)) for _ in range(200)]
            medians.append(np.median(maxima))
        self.assertTrue(np.all(np.diff(medians) < 0.))


if __name__ == "__main__":
    unittest.main()
