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

from .renewal import AgingWindow, EnsembleResult, classify_regime, survival_probability_theory, \
    mean_renewals_theory, moment_renewals_theory, forward_waiting_pdf
from .actrw import msd_theory, propagator_theory, response_experiment, fluctuation_response_theory
from .fokker_planck import FpeGrid, FpeSolution, solve_tempered_fpe
