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

"""Exception types raised across the package. They derive from the builtin
exceptions (ValueError, RuntimeError) so that callers catching those keep
working; the experiment runner maps them onto process exit codes.
"""


class ConfigurationError(ValueError):
    """Invalid experiment configuration or sampler setup."""


class RegimeError(ValueError):
    """No asymptotic regime matches the requested (t_a, t, lambda) cell. Use
    the exact (Laplace inversion) mode instead.
    """


class ConvergenceError(RuntimeError):
    """A numerical procedure (Laplace inversion, quadrature) did not reach
    its tolerance.
    """


class ContourCollisionError(ConvergenceError):
    """The inner Talbot contour hits a singularity of the two-variable
    transform at the current outer node.
    """


class InstabilityError(ConvergenceError):
    """The Fokker-Planck time marching produced negative densities or lost
    mass beyond the monitor thresholds.
    """


class SimulationCapError(RuntimeError):
    """A trajectory exceeded the configured number of renewals."""


class ToleranceError(RuntimeError):
    """A built-in Monte Carlo versus theory check failed."""
