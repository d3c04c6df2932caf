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

"""Monte Carlo ensembles of the aging continuous-time random walk.

The walker waits at the origin from time 0, with renewal epochs drawn as in
the renewal engine. Only jumps at epochs inside the observation window
(t_a, t_a + t] contribute to the displacement, which is therefore measured
from the position at t_a. The jump lengths are independent of the waiting
times (decoupled walk).
"""

from dataclasses import dataclass
from functools import partial

import numpy as np

from tempered_actrw.toolboxes.sampling import sample_displacement, run_ensemble
from tempered_actrw.algorithms.renewal import EnsembleResult, renewal_counts, simulate_renewal_count
from tempered_actrw.algorithms.renewal.simulation import DEFAULT_MAX_RENEWALS
from tempered_actrw.algorithms.actrw.theory import msd_theory


DEFAULT_N_BINS = 201
# Histogram half-width in units of the root mean squared displacement.
DEFAULT_HALF_WIDTH = 6.


@dataclass(frozen=True)
class WalkRecord:
    """Outcome of one walk over an observation window.

    Attributes:
        x_final (float): Displacement over (t_a, t_a + t].
        n_a (int): Number of jumps in the window.
        moved (bool): Whether the walker jumped at least once.
    """
    x_final: float
    n_a: int
    moved: bool

    def __post_init__(self):
        if self.moved != (self.n_a >= 1):
            raise ValueError(f"Inconsistent walk record: moved = {self.moved} with n_a = {self.n_a}.")
        if not self.moved and self.x_final != 0.:
            raise ValueError(f"A walker that never jumped cannot be displaced, got x = {self.x_final}.")


def simulate_walk(model, jump, window, rng, max_renewals=DEFAULT_MAX_RENEWALS):
    """Simulate one walk and return its displacement over the window.

    Args:
        model (WaitingTimeModel): Waiting-time law.
        jump (JumpModel): Jump-length law.
        window (AgingWindow): Observation window.
        rng (numpy.random.Generator): Source of randomness.
        max_renewals (int): Cap on the number of renewals.

    Returns:
        WalkRecord: Displacement, number of jumps and mover flag.
    """
    n_a = simulate_renewal_count(model, window, rng, max_renewals)
    x = float(sample_displacement(jump, n_a, rng)) if n_a else 0.
    return WalkRecord(x, n_a, n_a >= 1)


def _walk_trajectory(model, jump, t_a, t_grid, max_renewals, rng):
    counts = renewal_counts(model, t_a, t_grid, rng, max_renewals)
    x = np.cumsum(sample_displacement(jump, np.diff(counts, prepend=0), rng))
    return np.concatenate([x, counts])


def walk_ensemble(model, jump, t_a, t_grid, n_traj, seed, n_workers=None, max_renewals=DEFAULT_MAX_RENEWALS):
    """Displacements and jump counts of an ensemble of walks, observed at
    every t of a grid with a common aging time.

    Along each trajectory the displacements at successive grid points share
    their jumps, so a row is one walk observed at increasing times.

    Args:
        model (WaitingTimeModel): Waiting-time law.
        jump (JumpModel): Jump-length law.
        t_a (float): Aging time.
        t_grid (array): Increasing observation times.
        n_traj (int): Number of walks.
        seed (int): Base seed.
        n_workers (int): Number of worker processes.
        max_renewals (int): Cap on the number of renewals per walk.

    Returns:
        (array, array): Displacements and counts, each of shape
            (n_traj, len(t_grid)).
    """
    t_grid = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if np.any(np.diff(t_grid) <= 0.):
        raise ValueError("Observation times of a walk ensemble must be increasing.")
    trajectory = partial(_walk_trajectory, model, jump, t_a, t_grid, max_renewals)
    results = run_ensemble(trajectory, n_traj, seed, n_workers).reshape(n_traj, 2 * len(t_grid))
    n_t = len(t_grid)
    return results[:, :n_t], results[:, n_t:].astype(np.int64)


def msd_mc(model, jump, window, n_traj, seed, n_workers=None, max_renewals=DEFAULT_MAX_RENEWALS):
    """Monte Carlo mean squared displacement <r^2(t_a, t)> together with the
    mean number of jumps of the same walks.

    Returns:
        (EnsembleResult, EnsembleResult): <x^2> and <n_a>.
    """
    x, counts = walk_ensemble(model, jump, window.t_a, [window.t], n_traj, seed, n_workers, max_renewals)
    return (EnsembleResult.from_samples(x[:, 0] ** 2, seed),
            EnsembleResult.from_samples(counts[:, 0].astype(float), seed, outcomes=counts[:, 0]))


@dataclass
class PropagatorHistogram:
    """Histogram of the displacement of an ensemble of walks.

    Walkers that never jumped form the atom at zero and are not binned;
    movers outside the bin range are folded into the outermost bins.

    Attributes:
        bin_edges (array): Increasing bin edges.
        masses (array): Fraction of walkers per bin.
        atom_at_zero (float): Fraction of walkers that never jumped.
        window (AgingWindow): Observation window.
    """
    bin_edges: np.ndarray
    masses: np.ndarray
    atom_at_zero: float
    window: object

    def __post_init__(self):
        if len(self.bin_edges) != len(self.masses) + 1 or np.any(np.diff(self.bin_edges) <= 0.):
            raise ValueError("Bin edges must be increasing, with one more edge than bins.")
        if np.any(self.masses < 0.) or self.atom_at_zero < 0.:
            raise ValueError("Histogram masses must be non-negative.")
        total = self.atom_at_zero + np.sum(self.masses)
        if abs(total - 1.) > 1e-12:
            raise ValueError(f"Histogram masses and atom sum to {total}, expected 1.")

    @property
    def centers(self):
        return 0.5 * (self.bin_edges[1:] + self.bin_edges[:-1])

    @property
    def density(self):
        """Mover density per unit length, without the atom."""
        return self.masses / np.diff(self.bin_edges)

    def moments(self):
        """Moments of the binned distribution, the atom included at x = 0.

        Returns:
            dict: mean, second moment, skewness and excess kurtosis.
        """
        x = self.centers
        mean = np.dot(self.masses, x)
        central = x - mean
        variance = np.dot(self.masses, central ** 2) + self.atom_at_zero * mean ** 2
        third = np.dot(self.masses, central ** 3) - self.atom_at_zero * mean ** 3
        fourth = np.dot(self.masses, central ** 4) + self.atom_at_zero * mean ** 4
        return {"mean": float(mean), "second_moment": float(np.dot(self.masses, x ** 2)),
                "skewness": float(third / variance ** 1.5), "excess_kurtosis": float(fourth / variance ** 2 - 3.)}


def histogram_from_walks(x, moved, window, bin_edges):
    """Propagator histogram of displacements x, with non-movers in the atom."""
    x, moved = np.asarray(x, dtype=float), np.asarray(moved, dtype=bool)
    n_traj = len(x)
    clipped = np.clip(x[moved], bin_edges[0], bin_edges[-1])
    counts, _ = np.histogram(clipped, bins=bin_edges)
    masses = counts / n_traj
    atom = 1. - np.sum(masses)
    return PropagatorHistogram(np.asarray(bin_edges, dtype=float), masses, max(atom, 0.), window)


def propagator_mc(model, jump, window, n_traj, seed, bins=DEFAULT_N_BINS, half_width=None, n_workers=None,
                  max_renewals=DEFAULT_MAX_RENEWALS):
    """Monte Carlo propagator P(x, t_a, t).

    Args:
        model (WaitingTimeModel): Waiting-time law.
        jump (JumpModel): Jump-length law.
        window (AgingWindow): Observation window.
        n_traj (int): Number of walks.
        seed (int): Base seed.
        bins (int or array): Number of uniform bins, or the bin edges.
        half_width (float): Half-width of the uniform bins. Defaults to six
            times the root of the exact mean squared displacement.
        n_workers (int): Number of worker processes.
        max_renewals (int): Cap on the number of renewals per walk.

    Returns:
        PropagatorHistogram: Binned movers and the atom of non-movers.
    """
    if np.ndim(bins) == 0:
        if half_width is None:
            half_width = DEFAULT_HALF_WIDTH * np.sqrt(msd_theory(model, jump, window))
        bin_edges = np.linspace(-half_width, half_width, int(bins) + 1)
    else:
        bin_edges = np.asarray(bins, dtype=float)
    x, counts = walk_ensemble(model, jump, window.t_a, [window.t], n_traj, seed, n_workers, max_renewals)
    return histogram_from_walks(x[:, 0], counts[:, 0] >= 1, window, bin_edges)
