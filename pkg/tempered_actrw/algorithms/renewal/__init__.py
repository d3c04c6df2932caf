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

from .regimes import Scale, RegimeCell, classify_regime, compare_to_one
from .simulation import AgingWindow, EnsembleResult, renewal_epochs, renewal_counts, simulate_renewal_count, \
    count_ensemble, ensemble_moment, survival_probability_mc
from .theory import survival_probability_theory, mean_renewals_theory, moment_renewals_theory, \
    renewal_count_distribution_theory, forward_waiting_pdf, integrated_renewal_density, survival_kernel, \
    integrated_survival_kernel
