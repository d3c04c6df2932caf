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

from .transforms import LaplacePoint, principal_power, tempered_exponent, waiting_time_lt, \
    waiting_time_lt_derivative, forward_waiting_lt, cumulant_tau, moment_tau, mean_waiting_time
from .inversion import talbot_nodes, inverse_laplace, stehfest_coefficients, stehfest_inverse, \
    double_inverse_laplace
