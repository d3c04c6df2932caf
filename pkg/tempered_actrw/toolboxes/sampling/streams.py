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

"""Seeded random streams and the parallel ensemble driver.

Trajectory i of an ensemble with base seed s draws from its own PCG64 stream
seeded by SeedSequence([s, i]). Per-trajectory results therefore do not
depend on how trajectories are grouped into chunks or distributed over
worker processes. Chunks come back from the dask bag in submission order and are
concatenated, so every reduction over the ensemble runs in trajectory order.
"""

from functools import partial

import dask.bag as db
import numpy as np

from tempered_actrw.helpers.utils import default_n_workers


def trajectory_rng(seed, index):
    """Random generator of trajectory `index` in the ensemble seeded by `seed`.

    Args:
        seed (int): Base seed of the ensemble.
        index (int): Trajectory index.

    Returns:
        numpy.random.Generator: Independent stream.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(index)])))


def derived_seed(seed, label):
    """Base seed of a companion ensemble, derived from `seed` and an integer label."""
    return int(np.random.SeedSequence([int(seed), 2**31 + int(label)]).generate_state(1)[0])


def _run_chunk(trajectory, seed, indices):
    return [trajectory(trajectory_rng(seed, i)) for i in indices]


def run_ensemble(trajectory, n_traj, seed, n_workers=None, chunk_size=1000):
    """Run `trajectory(rng)` for n_traj independent streams.

    Args:
        trajectory (function): Picklable callable mapping a Generator to a
            tuple (or scalar) of per-trajectory results.
        n_traj (int): Number of trajectories.
        seed (int): Base seed.
        n_workers (int): Number of processes. Defaults to TACTRW_N_WORKERS.
        chunk_size (int): Trajectories per task.

    Returns:
        array: Per-trajectory results in trajectory order, shape (n_traj,)
            or (n_traj, n_fields).
    """
    if n_traj < 1:
        raise ValueError(f"Number of trajectories must be positive, got {n_traj}.")
    n_workers = default_n_workers() if n_workers is None else max(1, int(n_workers))
    chunks = [range(start, min(start + chunk_size, n_traj)) for start in range(0, n_traj, chunk_size)]
    task = partial(_run_chunk, trajectory, seed)

    if n_workers == 1 or len(chunks) == 1:
        results = [task(chunk) for chunk in chunks]
    else:
        bag = db.from_sequence(chunks, npartitions=len(chunks))
        results = bag.map(task).compute(scheduler="processes", num_workers=n_workers)

    return np.array([r for chunk in results for r in chunk], dtype=float)
