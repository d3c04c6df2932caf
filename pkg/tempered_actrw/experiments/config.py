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

"""Experiment configuration: a UTF-8 key = value file, one experiment per
file. Lines starting with # are comments. Values are numbers, words,
booleans, comma-separated lists, or grids written logspace(a, b, n)
(n points from 10^a to 10^b) and linspace(a, b, n).

    experiment = survival
    alpha = 0.6
    lambda = 1e-4
    t_a = 1, 10, 100, 1000, 10000
    t = logspace(0, 3, 13)
    n_traj = 5000
    seed = 1
"""

import re

import numpy as np

from tempered_actrw.helpers.exceptions import ConfigurationError
from tempered_actrw.toolboxes.sampling import WaitingTimeModel, JumpModel


EXPERIMENTS = ("sample", "renewal", "survival", "msd", "propagator", "response", "fpe")

_GRID_PATTERN = re.compile(r"^(logspace|linspace)\((.*)\)$")


def _parse_scalar(text):
    lowered = text.lower()
    if lowered in ("true", "yes", "on"):
        return True
    if lowered in ("false", "no", "off"):
        return False
    if lowered in ("none", ""):
        return None
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def parse_value(text):
    """Convert the right-hand side of a configuration line.

    Args:
        text (str): Raw value.

    Returns:
        Scalar, list, or numpy array for logspace / linspace grids.

    Raises:
        ConfigurationError: If a grid is malformed.
    """
    text = text.strip()
    grid = _GRID_PATTERN.match(text.replace(" ", ""))
    if grid:
        kind, arguments = grid.groups()
        try:
            start, stop, n = arguments.split(",")
            start, stop, n = float(start), float(stop), int(n)
        except ValueError:
            raise ConfigurationError(f"Malformed grid '{text}': expected {kind}(start, stop, n).")
        if n < 1:
            raise ConfigurationError(f"Grid '{text}' must have at least one point.")
        return np.logspace(start, stop, n) if kind == "logspace" else np.linspace(start, stop, n)
    if "," in text:
        return [_parse_scalar(item.strip()) for item in text.split(",") if item.strip()]
    return _parse_scalar(text)


def read_config_file(path):
    """Read a key = value file into a dictionary, the key `lambda` being
    stored as `lam`.

    Raises:
        ConfigurationError: On lines without '=' and on repeated keys.
    """
    entries = dict()
    with open(path, encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}, line {number}: expected 'key = value', got '{line}'.")
            key, value = (part.strip() for part in line.split("=", 1))
            key = "lam" if key == "lambda" else key
            if key in entries:
                raise ConfigurationError(f"{path}, line {number}: key '{key}' given twice.")
            entries[key] = parse_value(value)
    return entries


def _as_list(value):
    if value is None:
        return list()
    if isinstance(value, np.ndarray):
        return [float(v) for v in value]
    return list(value) if isinstance(value, list) else [value]


class ExperimentConfig:
    """Validated description of one experiment.

    Attributes:
        experiment (str): One of EXPERIMENTS.
        alpha (float): Stability index of the waiting times.
        lam (float or list): Tempering rate(s), one set of curves each.
        strategy (str): Tempering strategy of the sampler.
        t0 (float): Envelope cutoff of the powerlaw_envelope strategy.
        t_a (float or list): Aging time(s).
        t (list): Strictly increasing grid of observation times.
        jump (str): Jump law, gaussian or lattice.
        m2 (float): Second moment of Gaussian jumps.
        c (float): Lattice spacing.
        h (float): Bias of the response experiment.
        bins (int): Number of propagator bins.
        n_traj (int): Number of trajectories (or samples) per curve.
        seed (int): Base seed.
        n_workers (int): Worker processes, None for TACTRW_N_WORKERS.
        max_renewals (int): Cap on the renewals per trajectory.
        nt (int): Time steps of the Fokker-Planck solver.
        nx (int): Space nodes of the Fokker-Planck solver.
        sigma_tolerance (float): Allowed Monte Carlo deviation in standard
            errors in the built-in checks.
        relative_tolerance (float): Allowed relative deviation on top of
            the statistical one.
        absolute_tolerance (float): Allowed absolute deviation, covering
            estimates with no spread such as probabilities of 0 or 1.
        output_dir (str): Folder of the result files.
        plot (bool): Write plot.svg when matplotlib is installed.
        verbose (bool): Print progress.
    """

    def __init__(self, opt_dict):

        default_options = {"experiment": None,
                           "alpha": 0.6,
                           "lam": 0.,
                           "strategy": "exp_tilt_rejection",
                           "t0": 1e-3,
                           "t_a": 0.,
                           "t": None,
                           "jump": "gaussian",
                           "m2": 1.,
                           "c": 1.,
                           "h": 0.1,
                           "bins": 61,
                           "n_traj": 1000,
                           "seed": 0,
                           "n_workers": None,
                           "max_renewals": 10**9,
                           "nt": 400,
                           "nx": 201,
                           "sigma_tolerance": 4.,
                           "relative_tolerance": 0.05,
                           "absolute_tolerance": 1e-3,
                           "output_dir": "results",
                           "plot": True,
                           "verbose": False}

        # Initialize with default values
        self.__dict__ = default_options
        # Overwrite default values with user-provided ones, if they correspond to a valid keyword
        for k, v in opt_dict.items():
            if k in default_options:
                setattr(self, k, v)
            else:
                raise KeyError(f"Keyword :: {k}, not available in {self.__class__.__name__}.")

        self._validate()

    @classmethod
    def from_file(cls, path, **overrides):
        """Read and validate a configuration file. Keyword arguments that
        are not None override the file entries.

        Raises:
            ConfigurationError: On any invalid entry, unknown keys included.
        """
        entries = read_config_file(path)
        entries.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls(entries)
        except KeyError as error:
            raise ConfigurationError(error.args[0])

    def _validate(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigurationError(f"Unknown experiment '{self.experiment}'. Supported: {', '.join(EXPERIMENTS)}.")

        for name in ("lam", "t_a", "t"):
            values = getattr(self, name)
            try:
                setattr(self, name, [float(v) for v in _as_list(values)])
            except (TypeError, ValueError):
                raise ConfigurationError(f"Keyword :: {name}, expects numbers, got {values!r}.")
        for name in ("alpha", "t0", "m2", "c", "h", "sigma_tolerance", "relative_tolerance", "absolute_tolerance"):
            value = getattr(self, name)
            try:
                setattr(self, name, float(value))
            except (TypeError, ValueError):
                raise ConfigurationError(f"Keyword :: {name}, expects a number, got {value!r}.")

        if not self.t:
            raise ConfigurationError("The observation time grid t is empty.")
        if self.t[0] <= 0. or np.any(np.diff(self.t) <= 0.):
            raise ConfigurationError(f"The observation time grid must be positive and strictly increasing, "
                                     f"got {self.t}.")
        if not self.lam or not self.t_a:
            raise ConfigurationError("At least one tempering rate lambda and one aging time t_a are required.")
        if min(self.t_a) < 0.:
            raise ConfigurationError(f"Aging times must be non-negative, got {self.t_a}.")

        for name in ("n_traj", "seed", "bins", "nt", "nx", "max_renewals"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < (0 if name == "seed" else 1):
                raise ConfigurationError(f"{name} must be a {'non-negative' if name == 'seed' else 'positive'} "
                                         f"integer, got {value!r}.")
        if self.n_workers is not None and (not isinstance(self.n_workers, int) or self.n_workers < 1):
            raise ConfigurationError(f"n_workers must be a positive integer, got {self.n_workers!r}.")
        if not self.sigma_tolerance > 0. or not self.relative_tolerance >= 0. or not self.absolute_tolerance >= 0.:
            raise ConfigurationError("Check tolerances must be positive.")

        # Surface the domain errors of the models as configuration errors.
        try:
            _ = self.models, self.jump_model
        except (TypeError, ValueError) as error:
            raise ConfigurationError(str(error))

    @property
    def models(self):
        """One waiting-time law per tempering rate."""
        return [WaitingTimeModel(self.alpha, lam, self.strategy, self.t0) for lam in self.lam]

    @property
    def jump_model(self):
        if self.jump == "lattice":
            return JumpModel("lattice", c=self.c)
        return JumpModel(self.jump, m2=self.m2)

    @property
    def t_grid(self):
        return np.array(self.t)

    def as_dict(self):
        """JSON-ready echo of the configuration."""
        return {k: v for k, v in self.__dict__.items()}
