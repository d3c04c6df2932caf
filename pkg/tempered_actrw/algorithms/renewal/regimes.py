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

"""Classification of an observation window into the asymptotic regimes of
aging renewal theory.

Three dimensionless ratios matter: t / t_a (strong aging when small, weak
aging when large), lambda t_a and lambda t. A ratio below 0.1 counts as
"much smaller than one" and a ratio above 10 as "much larger"; anything in
between is a crossover where no closed asymptotic form applies.
"""

from dataclasses import dataclass
from enum import Enum


MUCH_SMALLER = 0.1
MUCH_LARGER = 10.


class Scale(str, Enum):
    """Order of magnitude of a dimensionless ratio relative to one."""
    small = "<<1"
    crossover = "~1"
    large = ">>1"


def compare_to_one(ratio):
    """Scale of a non-negative ratio (inf for division by zero is large)."""
    if ratio < MUCH_SMALLER:
        return Scale.small
    if ratio > MUCH_LARGER:
        return Scale.large
    return Scale.crossover


@dataclass(frozen=True)
class RegimeCell:
    """Regime of an aging window (t_a, t) for a tempering rate lambda.

    Attributes:
        aging (Scale): Scale of t / t_a. small means strong aging.
        lam_t_a (Scale): Scale of lambda t_a.
        lam_t (Scale): Scale of lambda t.
    """
    aging: Scale
    lam_t_a: Scale
    lam_t: Scale

    @property
    def strong_aging(self):
        return self.aging is Scale.small

    @property
    def weak_aging(self):
        return self.aging is Scale.large

    @property
    def label(self):
        """Compact label, e.g. 'strong_aging|lam_ta>>1|lam_t<<1'."""
        aging = {Scale.small: "strong_aging", Scale.large: "weak_aging", Scale.crossover: "intermediate_aging"}
        return f"{aging[self.aging]}|lam_ta{self.lam_t_a.value}|lam_t{self.lam_t.value}"


def classify_regime(model, window):
    """Regime cell of an observation window.

    Args:
        model (WaitingTimeModel): Waiting-time law (only lambda is used).
        window (AgingWindow): Aging time t_a and observation time t.

    Returns:
        RegimeCell: Scales of t / t_a, lambda t_a and lambda t.
    """
    aging = compare_to_one(window.t / window.t_a) if window.t_a > 0. else Scale.large
    return RegimeCell(aging, compare_to_one(model.lam * window.t_a), compare_to_one(model.lam * window.t))
