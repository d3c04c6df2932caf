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

"""Monte Carlo simulation of the aging renewal process.

The renewal clock starts at time 0. Waiting times are drawn in batches of
growing size and accumulated into renewal epochs up to the end of the
observation window; the count n_a(t_a, t) is the number of epochs in the
half-open window (t_a, t_a + t]. An epoch exactly at t_a belongs to the
aging period.
"""

from dataclasses import dataclass, field
from functools import partial

import numpy as np

from tempered_actrw.helpers.exceptions import SimulationCapError
from tempered_actrw.toolboxes.sampling import sample_tempered_waiting, run_ensemble
from tempered_actrw.toolboxes.post_processing import mean_and_error, binomial_error, outcome_frequencies


DEFAULT_MAX_RENEWALS = 10**9
# Waiting times drawn per batch grow geometrically up to this size.
MAX_BATCH = 1 << 16


@dataclass(frozen=True)
class AgingWindow:
    """Observation window (t_a, t_a + t].

    Attributes:
        t_a (float): Aging time, non-negative.
        t (float): Observation time, positive.
    """
    t_a: float
    t: float

    def __post_init__(self):
        if not self.t_a >= 0.:
            raise ValueError(f"Aging time t_a must be non-negative, got {self.t_a}.")
        if not self.t > 0.:
            raise ValueError(f"Observation time t must be positive, got {self.t}.")

    @property
    def end(self):
        return self.t_a + self.t


@dataclass
class EnsembleResult:
    """Monte Carlo estimate over an ensemble of trajectories.

    Attributes:
        n_traj (int): Number of trajectories.
        seed (int): Base seed of the ensemble.
        estimate (float): Ensemble average.
        std_error (float): Standard error of the average.
        raw_histogram (dict): Optional outcome -> count histogram, with counts
            summing to n_traj.
    """
    n_traj: int
    seed: int
    estimate: float
    std_error: float
    raw_histogram: dict = field(default=None)

    def __post_init__(self):
        if self.raw_histogram is not None and sum(self.raw_histogram.values()) != self.n_traj:
            raise ValueError(f"Histogram counts sum to {sum(self.raw_histogram.values())}, "
                             f"expected n_traj = {self.n_traj}.")

    @classmethod
    def from_samples(cls, values, seed, outcomes=None):
        """Average of per-trajectory values, with an optional histogram of
        integer outcomes.
        """
        mean, error = mean_and_error(values)
        histogram = None if outcomes is None else outcome_frequencies(outcomes)
        return cls(len(values), seed, mean, error, histogram)

    @classmethod
    def from_indicator(cls, indicator, seed):
        """Probability estimate from boolean outcomes, with binomial error."""
        indicator = np.asarray(indicator, dtype=bool)
        fraction = float(np.mean(indicator))
        return cls(len(indicator), seed, fraction, binomial_error(fraction, len(indicator)))


def renewal_epochs(model, horizon, rng, max_renewals=DEFAULT_MAX_RENEWALS):
    """Renewal epochs of one trajectory up to a time horizon.

    Args:
        model (WaitingTimeModel): Waiting-time law.
        horizon (float): Last time of interest.
        rng (numpy.random.Generator): Source of randomness.
        max_renewals (int): Cap on the number of renewals before the horizon.

    Returns:
        array: Sorted epochs in (0, horizon].

    Raises:
        SimulationCapError: If more than max_renewals epochs precede the
            horizon.
    """
    chunks, clock, n_drawn, batch = [], 0., 0, 32
    while clock <= horizon:
        if n_drawn >= max_renewals:
            raise SimulationCapError(f"More than {max_renewals} renewals before t = {horizon} "
                                     f"(alpha = {model.alpha}, lambda = {model.lam}).")
        times = clock + np.cumsum(sample_tempered_waiting(model, rng, batch))
        chunks.append(times)
        clock = times[-1]
        n_drawn += batch
        batch = min(2 * batch, MAX_BATCH)
    epochs = np.concatenate(chunks)
    return epochs[:np.searchsorted(epochs, horizon, side="right")]


def renewal_counts(model, t_a, t_grid, rng, max_renewals=DEFAULT_MAX_RENEWALS):
    """Counts n_a(t_a, t) of one trajectory for every t of a grid.

    Args:
        model (WaitingTimeModel): Waiting-time law.
        t_a (float): Aging time.
        t_grid (array): Observation times, positive.
        rng (numpy.random.Generator): Source of randomness.
        max_renewals (int): Cap on the number of renewals.

    Returns:
        array of int: Number of epochs in (t_a, t_a + t] for each t.
    """
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=float))
    epochs = renewal_epochs(model, t_a + np.max(t_grid), rng, max_renewals)
    before = np.searchsorted(epochs, t_a, side="right")
    return np.searchsorted(epochs, t_a + t_grid, side="right") - before


def simulate_renewal_count(model, window, rng, max_renewals=DEFAULT_MAX_RENEWALS):
    """Number of renewals n_a(t_a, t) of one trajectory in the window."""
    return int(renewal_counts(model, window.t_a, [window.t], rng, max_renewals)[0])


def _count_trajectory(model, t_a, t_grid, max_renewals, rng):
    return renewal_counts(model, t_a, t_grid, rng, max_renewals)


def count_ensemble(model, t_a, t_grid, n_traj, seed, n_workers=None, max_renewals=DEFAULT_MAX_RENEWALS):
    """Renewal counts of an ensemble of trajectories on a grid of
    observation times sharing the aging time t_a.

    Args:
        model (WaitingTimeModel): Waiting-time law.
        t_a (float): Aging time.
        t_grid (array): Observation times.
        n_traj (int): Number of trajectories.
        seed (int): Base seed; trajectory i uses the stream (seed, i).
        n_workers (int): Number of worker processes.
        max_renewals (int): Cap on the number of renewals per trajectory.

    Returns:
        array of int: Counts, shape (n_traj, len(t_grid)).
    """
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=float))
    trajectory = partial(_count_trajectory, model, t_a, t_grid, max_renewals)
    counts = run_ensemble(trajectory, n_traj, seed, n_workers)
    return counts.reshape(n_traj, len(t_grid)).astype(np.int64)


def ensemble_moment(model, window, p, n_traj, seed, n_workers=None, max_renewals=DEFAULT_MAX_RENEWALS):
    """Monte Carlo estimate of <n_a^p(t_a, t)>.

    Args:
        model (WaitingTimeModel): Waiting-time law.
        window (AgingWindow): Observation window.
        p (float): Order of the moment, positive.
        n_traj (int): Number of trajectories.
        seed (int): Base seed.
        n_workers (int): Number of worker processes.
        max_renewals (int): Cap on the number of renewals per trajectory.

    Returns:
        EnsembleResult: Estimate, standard error and the histogram of n_a.
    """
    if not p > 0.:
        raise ValueError(f"Moment order p must be positive, got {p}.")
    counts = count_ensemble(model, window.t_a, [window.t], n_traj, seed, n_workers, max_renewals)[:, 0]
    return EnsembleResult.from_samples(counts.astype(float) ** p, seed, outcomes=counts)


def survival_probability_mc(model, window, n_traj, seed, n_workers=None, max_renewals=DEFAULT_MAX_RENEWALS):
    """Monte Carlo estimate of P0(t_a, t), the probability of no renewal in
    the window, with binomial standard error.
    """
    counts = count_ensemble(model, window.t_a, [window.t], n_traj, seed, n_workers, max_renewals)[:, 0]
    return EnsembleResult.from_indicator(counts == 0, seed)
