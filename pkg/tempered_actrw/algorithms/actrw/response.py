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

"""Fluctuation-response experiment on the biased lattice.

The walker moves on a lattice of spacing c. During the aging interval
(0, t_a] the jumps are unbiased; at t_a a constant force is switched on and
during (t_a, t_a + t_b] jumps go right with probability (1 + h)/2, where
h = c F / (2 k_B T). The experiment measures the response <x_b>, the
unbiased mean squared displacement <r^2(t_a, t_b)>_0 of a companion
ensemble, and the correlation of the renewal counts n_a and n_b of the two
intervals.
"""

import warnings
from dataclasses import dataclass
from functools import partial

import numpy as np

from tempered_actrw.toolboxes.sampling import JumpKind, JumpModel, sample_displacement, run_ensemble, \
    derived_seed
from tempered_actrw.toolboxes.post_processing import ratio_of_means, bootstrap_error
from tempered_actrw.algorithms.renewal import EnsembleResult, renewal_epochs
from tempered_actrw.algorithms.renewal.simulation import DEFAULT_MAX_RENEWALS
from tempered_actrw.algorithms.actrw.walks import walk_ensemble


# Relative standard error of <x_b> above which the response is reported as noisy.
NOISY_RESPONSE = 0.2
COMPANION_SEED_LABEL = 1
BOOTSTRAP_SEED_LABEL = 2


@dataclass(frozen=True)
class ResponseExperiment:
    """Biased-lattice experiment.

    Attributes:
        model (WaitingTimeModel): Waiting-time law of both intervals.
        c (float): Lattice spacing.
        h (float): Bias during the response interval, in [0, 1).
        t_a (float): Length of the unbiased aging interval.
        t_b (float): Length of the biased response interval.
    """
    model: object
    c: float = 1.
    h: float = 0.1
    t_a: float = 1000.
    t_b: float = 5.

    def __post_init__(self):
        if not 0. <= self.h < 1.:
            raise ValueError(f"Bias h must lie in [0, 1), got {self.h}.")
        if not self.c > 0.:
            raise ValueError(f"Lattice spacing c must be positive, got {self.c}.")
        if not (self.t_a >= 0. and self.t_b > 0.):
            raise ValueError(f"Intervals must satisfy t_a >= 0 and t_b > 0, got t_a = {self.t_a}, "
                             f"t_b = {self.t_b}.")

    @property
    def unbiased_jump(self):
        return JumpModel(JumpKind.lattice, c=self.c)

    @property
    def biased_jump(self):
        return JumpModel(JumpKind.lattice, c=self.c, h=self.h)


@dataclass
class ResponseRecord:
    """Outcome of a fluctuation-response experiment.

    Attributes:
        mean_x_b (EnsembleResult): Response <x_b> of the biased walks.
        mean_r2_aging (EnsembleResult): <r^2(t_a, t_b)>_0 of the unbiased
            companion ensemble.
        count_ratio (float): <n_a n_b> / (<n_a> <n_b>).
        count_ratio_error (float): Bootstrap standard error of count_ratio.
        f_r_mc (float): Counting estimate of F_R, count_ratio - 1.
        f_r_displacement (float): <x_a^2 x_b> / (<x_a^2> <x_b>) - 1, nan
            without bias.
        einstein_ratio (float): <x_b> c / (h <r^2>_0), one under the
            Einstein relation; nan without bias.
    """
    mean_x_b: EnsembleResult
    mean_r2_aging: EnsembleResult
    count_ratio: float
    count_ratio_error: float
    f_r_mc: float
    f_r_displacement: float
    einstein_ratio: float


def _response_trajectory(cfg, max_renewals, rng):
    epochs = renewal_epochs(cfg.model, cfg.t_a + cfg.t_b, rng, max_renewals)
    n_a = int(np.searchsorted(epochs, cfg.t_a, side="right"))
    n_b = len(epochs) - n_a
    x_a = float(sample_displacement(cfg.unbiased_jump, n_a, rng)) if n_a else 0.
    x_b = float(sample_displacement(cfg.biased_jump, n_b, rng)) if n_b else 0.
    return n_a, n_b, x_a, x_b


def response_experiment(cfg, n_traj, seed, n_workers=None, n_resamples=200, max_renewals=DEFAULT_MAX_RENEWALS,
                        verbose=False):
    """Run the biased-lattice experiment and its unbiased companion.

    The companion ensemble uses a seed derived from `seed`, so it is
    independent of the biased walks.

    Args:
        cfg (ResponseExperiment): Experiment parameters.
        n_traj (int): Number of walks of each ensemble.
        seed (int): Base seed.
        n_workers (int): Number of worker processes.
        n_resamples (int): Bootstrap resamples of the counting ratio.
        max_renewals (int): Cap on the number of renewals per walk.
        verbose (bool): Print the estimates.

    Returns:
        ResponseRecord: Response, companion MSD and correlation estimates.
    """
    trajectory = partial(_response_trajectory, cfg, max_renewals)
    n_a, n_b, x_a, x_b = run_ensemble(trajectory, n_traj, seed, n_workers).T

    mean_x_b = EnsembleResult.from_samples(x_b, seed)
    companion_seed = derived_seed(seed, COMPANION_SEED_LABEL)
    x_0, _ = walk_ensemble(cfg.model, cfg.unbiased_jump, cfg.t_a, [cfg.t_b], n_traj, companion_seed, n_workers,
                           max_renewals)
    mean_r2 = EnsembleResult.from_samples(x_0[:, 0] ** 2, companion_seed)

    with np.errstate(divide="ignore", invalid="ignore"):
        count_ratio = ratio_of_means(n_a * n_b, n_a, n_b)
    rng = np.random.default_rng(derived_seed(seed, BOOTSTRAP_SEED_LABEL))
    count_ratio_error = bootstrap_error(ratio_of_means, [n_a * n_b, n_a, n_b], rng, n_resamples) \
        if np.isfinite(count_ratio) else float("nan")

    if cfg.h > 0.:
        f_r_displacement = ratio_of_means(x_a ** 2 * x_b, x_a ** 2, x_b) - 1.
        einstein_ratio = mean_x_b.estimate * cfg.c / (cfg.h * mean_r2.estimate)
        if abs(mean_x_b.std_error) > NOISY_RESPONSE * abs(mean_x_b.estimate):
            warnings.warn(f"Response <x_b> = {mean_x_b.estimate:.4g} has a relative standard error above "
                          f"{NOISY_RESPONSE:.0%}; increase n_traj or h.", RuntimeWarning)
    else:
        f_r_displacement = einstein_ratio = float("nan")

    record = ResponseRecord(mean_x_b, mean_r2, count_ratio, count_ratio_error, count_ratio - 1.,
                            f_r_displacement, einstein_ratio)
    if verbose:
        print(f"<x_b> = {mean_x_b.estimate:.6g} +/- {mean_x_b.std_error:.2g}, "
              f"<r^2>_0 = {mean_r2.estimate:.6g} +/- {mean_r2.std_error:.2g}")
        print(f"<n_a n_b>/(<n_a><n_b>) = {count_ratio:.6g} +/- {count_ratio_error:.2g}, "
              f"Einstein ratio = {einstein_ratio:.6g}")
    return record
