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

"""This file provides information about the optional packages installed in the
user's environment, for the purpose of running / skipping tests and deciding
whether plots can be produced. It also reads the package environment variables
(see env_var.sh).
"""

import os


def is_package_installed(package_name):
    try:
        exec(f"import {package_name}")
        return True
    except ModuleNotFoundError:
        return False


def default_n_workers():
    """Number of worker processes used for Monte Carlo ensembles when none is
    requested explicitly. Read from TACTRW_N_WORKERS, defaults to 1.

    Returns:
        int: Number of workers (at least 1).
    """
    value = os.getenv("TACTRW_N_WORKERS", "")
    try:
        return max(1, int(value))
    except ValueError:
        return 1


# Optional plotting backends. Only matplotlib is supported at the moment.
all_plotting_backends = {"matplotlib"}
installed_plotting_backends = {p for p in all_plotting_backends if is_package_installed(p)}
plotting_available = "matplotlib" in installed_plotting_backends
