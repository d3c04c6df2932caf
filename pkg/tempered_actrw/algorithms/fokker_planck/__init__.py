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

from .grunwald import grunwald_weights, gl_tempered_weights, tempered_derivative
from .fpe_solver import FpeGrid, FpeSolution, TemperedFpeSolver, ConvergenceStudy, moved_fraction, \
    solve_tempered_fpe, grid_convergence_study
