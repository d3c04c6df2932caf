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

"""Jump-length laws of the random walk: a symmetric Gaussian with second
moment m2, or a nearest-neighbour lattice walk with spacing c and bias h
(right with probability (1+h)/2, left with (1-h)/2).
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np


class JumpKind(str, Enum):
    """Supported jump-length laws."""
    gaussian = "gaussian"
    lattice = "lattice"


@dataclass(frozen=True)
class JumpModel:
    """Jump-length law.

    Attributes:
        kind (JumpKind): gaussian or lattice.
        m2 (float): Second moment of the Gaussian law.
        c (float): Lattice spacing.
        h (float): Lattice bias, |h| < 1.
    """
    kind: JumpKind = JumpKind.gaussian
    m2: float = 1.
    c: float = 1.
    h: float = 0.

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", JumpKind(self.kind))
        except ValueError:
            raise ValueError(f"Unknown jump kind {self.kind}. Supported: {[k.value for k in JumpKind]}.")
        if self.kind is JumpKind.gaussian and not self.m2 > 0.:
            raise ValueError(f"Gaussian jump second moment m2 must be positive, got {self.m2}.")
        if self.kind is JumpKind.lattice:
            if not self.c > 0.:
                raise ValueError(f"Lattice spacing c must be positive, got {self.c}.")
            if not abs(self.h) < 1.:
                raise ValueError(f"Lattice bias must satisfy |h| < 1, got {self.h}.")

    @property
    def second_moment(self):
        """M2, the second moment of a single jump."""
        return self.m2 if self.kind is JumpKind.gaussian else self.c ** 2

    @property
    def mean(self):
        return 0. if self.kind is JumpKind.gaussian else self.h * self.c

    def with_bias(self, h):
        """Copy of a lattice law with another bias."""
        return JumpModel(JumpKind.lattice, self.m2, self.c, h)


def sample_jump(jump, rng, size=None):
    """Draw single jump lengths.

    Args:
        jump (JumpModel): Jump-length law.
        rng (numpy.random.Generator): Source of randomness.
        size (int): Number of jumps. A single float is returned if None.

    Returns:
        float or array: Jump lengths.
    """
    if jump.kind is JumpKind.gaussian:
        return rng.normal(0., np.sqrt(jump.m2), size)
    right = rng.random(size) < 0.5 * (1. + jump.h)
    return jump.c * (2. * right - 1.)


def sample_displacement(jump, n_jumps, rng):
    """Draw the sum of n i.i.d. jumps for each entry of n_jumps, without
    drawing the individual jumps.

    A sum of n Gaussian jumps is Gaussian with variance n m2, and a sum of n
    lattice jumps is c (2 B - n) with B ~ Binomial(n, (1+h)/2).

    Args:
        jump (JumpModel): Jump-length law.
        n_jumps (array of int): Number of jumps per walker.
        rng (numpy.random.Generator): Source of randomness.

    Returns:
        array: Total displacements.
    """
    n_jumps = np.asarray(n_jumps, dtype=np.int64)
    if jump.kind is JumpKind.gaussian:
        return np.sqrt(n_jumps * jump.m2) * rng.standard_normal(n_jumps.shape)
    right = rng.binomial(n_jumps, 0.5 * (1. + jump.h))
    return jump.c * (2. * right - n_jumps)
