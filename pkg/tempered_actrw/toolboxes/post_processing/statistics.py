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

"""Estimators for Monte Carlo ensembles: sample means with standard errors,
binomial errors of indicator averages, outcome histograms and bootstrap
errors of ratio estimators.
"""

from collections import Counter

import numpy as np
from scipy import stats


def mean_and_error(values):
    """Sample mean and its standard error s / sqrt(n).

    Args:
        values (array-like): Per-trajectory values.

    Returns:
        (float, float): Mean and standard error. The error is nan for a
            single value.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("Cannot average an empty ensemble.")
    if values.size == 1:
        return float(values[0]), float("nan")
    return float(np.mean(values)), float(stats.sem(values))


def binomial_error(fraction, n_samples):
    """Standard error sqrt(p (1 - p) / n) of an estimated probability."""
    return float(np.sqrt(fraction * (1. - fraction) / n_samples))


def outcome_frequencies(outcomes):
    """Histogram of integer outcomes, as a dictionary outcome -> count,
    sorted by outcome.
    """
    counts = Counter(int(k) for k in np.asarray(outcomes).ravel())
    return dict(sorted(counts.items()))


def ratio_of_means(numerator, denominator_a, denominator_b=None):
    """<x> / (<y>) or <x> / (<y> <z>) for paired samples."""
    numerator = np.asarray(numerator, dtype=float)
    denominator = np.mean(denominator_a)
    if denominator_b is not None:
        denominator *= np.mean(denominator_b)
    return float(np.mean(numerator) / denominator)


def bootstrap_error(estimator, samples, rng, n_resamples=200, chunk_size=50):
    """Bootstrap standard error of a statistic of paired samples.

    Trajectories are resampled with replacement (the same indices for every
    sample array, so correlations between them are kept) and the statistic
    is recomputed on each resample. Resamples are drawn in chunks to bound
    memory for large ensembles.

    Args:
        estimator (function): Maps the sample arrays (as positional
            arguments) to a float.
        samples (list of array): Paired per-trajectory samples, same length.
        rng (numpy.random.Generator): Source of randomness.
        n_resamples (int): Number of bootstrap resamples.
        chunk_size (int): Resamples drawn per chunk.

    Returns:
        float: Standard deviation of the statistic over the resamples.
    """
    samples = [np.asarray(s, dtype=float) for s in samples]
    n = len(samples[0])
    if any(len(s) != n for s in samples):
        raise ValueError("Bootstrap samples must have the same length.")

    replicates = []
    n_chunks = n_resamples // chunk_size
    for i in range(n_chunks + 1):
        this_chunk = n_resamples % chunk_size if i == n_chunks else chunk_size
        for indices in rng.integers(0, n, size=(this_chunk, n)):
            replicates.append(estimator(*[s[indices] for s in samples]))
    return float(np.std(replicates, ddof=1))
