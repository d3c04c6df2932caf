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

from .waiting_times import SamplerStrategy, WaitingTimeModel, TemperedWaitingSampler, sample_one_sided_stable, \
    sample_tempered_waiting, one_sided_stable_pdf, one_sided_stable_cdf, tempered_waiting_pdf, powerlaw_envelope
from .jumps import JumpKind, JumpModel, sample_jump, sample_displacement
from .streams import trajectory_rng, derived_seed, run_ensemble
