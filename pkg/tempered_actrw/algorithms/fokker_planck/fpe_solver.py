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

"""Finite-difference solver of the aging Fokker-Planck equation for the
moving part P(x, t_a, t) of the tempered walk propagator, the walkers that
have not jumped in (t_a, t_a + t] forming a separate atom at x = 0.

In Laplace space (t -> u) the moving part obeys

    L(u) P = D (1 - L(u)) d2P/dx2 + L(u) W(u) delta(x),

with L(u) = (u + lambda)^alpha - lambda^alpha, D = M2 / 2 and
W(t) = 1 - P0(t_a, t) the fraction of walkers that have moved. L(u) is the
tempered operator exp(-lambda t) D^alpha exp(lambda t) - lambda^alpha,
discretized with tempered Grunwald-Letnikov weights. The Laplacian is
implicit and the memory enters through the explicit history sum, so that
each step is one tridiagonal solve

    (a - D A) P_k = a W_k delta / dx - c sum_{j>=1} w_j (P_{k-j} - W_{k-j} delta / dx),

with c = dt^(-alpha), a = c - lambda^alpha and A the Dirichlet Laplacian.

The memory Laplacian -D L(u) d2P/dx2 is dropped by default: it vanishes at
long times, and kept in the scheme it multiplies the Laplacian by
D (1 - a) < 0, an anti-diffusion that the history sum must compensate. It can
be retained for comparison with retain_memory_laplacian.
"""

import json
from dataclasses import dataclass

import h5py
import numpy as np
import pandas as pd
from scipy.linalg import solve_banded
from scipy.special import roots_legendre

from tempered_actrw.helpers.exceptions import InstabilityError
from tempered_actrw.helpers.math import graded_integral
from tempered_actrw.toolboxes.post_processing import richardson, observed_order
from tempered_actrw.toolboxes.sampling import WaitingTimeModel
from tempered_actrw.algorithms.renewal import AgingWindow, forward_waiting_pdf, mean_renewals_theory
from tempered_actrw.algorithms.fokker_planck.grunwald import gl_tempered_weights


# Half-width of the default grid, in units of the root mean squared displacement.
WIDTH_FACTOR = 8.
MASS_TOLERANCE = 1e-3
NEGATIVITY_TOLERANCE = 1e-8
# Gauss-Legendre nodes per time cell in the quadrature of the source.
N_CELL_NODES = 4


@dataclass(frozen=True)
class FpeGrid:
    """Space-time grid of the solver: nx nodes on [-x_max, x_max] and nt
    steps of length dt covering the observation window.

    Attributes:
        x_max (float): Half-width of the domain.
        nx (int): Number of nodes, odd so that x = 0 is a node.
        dt (float): Time step, with dt nt = window.t.
        nt (int): Number of time steps.
        window (AgingWindow): Observation window.
        model (WaitingTimeModel): Waiting-time law.
        m2 (float): Second moment of the jump lengths.
    """
    x_max: float
    nx: int
    dt: float
    nt: int
    window: AgingWindow
    model: WaitingTimeModel
    m2: float = 1.

    def __post_init__(self):
        if not self.x_max > 0.:
            raise ValueError(f"Domain half-width must be positive, got {self.x_max}.")
        if self.nx < 3 or self.nx % 2 == 0:
            raise ValueError(f"Number of space nodes must be odd and at least 3, got {self.nx}.")
        if self.nt < 1:
            raise ValueError(f"Number of time steps must be positive, got {self.nt}.")
        if not self.dt > 0. or abs(self.dt * self.nt - self.window.t) > 1e-9 * self.window.t:
            raise ValueError(f"Time step {self.dt} times {self.nt} steps does not cover t = {self.window.t}.")
        if not self.m2 > 0.:
            raise ValueError(f"Jump second moment must be positive, got {self.m2}.")
        # a = dt^-alpha - lambda^alpha must stay positive.
        if not self.model.lam * self.dt < 1.:
            raise ValueError(f"Time step {self.dt} too large for lambda = {self.model.lam}: "
                             "lambda dt must be below 1.")

    @classmethod
    def from_window(cls, model, window, nt, nx=201, x_max=None, m2=1.):
        """Uniform grid over a window. The default half-width is eight times
        the root of the exact mean squared displacement.
        """
        if x_max is None:
            msd = m2 * mean_renewals_theory(model, window, "exact", small_u_law=True)
            x_max = WIDTH_FACTOR * np.sqrt(msd)
        return cls(float(x_max), int(nx), window.t / nt, int(nt), window, model, m2)

    @property
    def x_min(self):
        return -self.x_max

    @property
    def dx(self):
        return 2. * self.x_max / (self.nx - 1)

    @property
    def x(self):
        return np.linspace(-self.x_max, self.x_max, self.nx)

    @property
    def times(self):
        return self.dt * np.arange(self.nt + 1)

    @property
    def diffusivity(self):
        return 0.5 * self.m2

    def refined(self):
        """Grid with halved time and space steps over the same domain."""
        return FpeGrid(self.x_max, 2 * self.nx - 1, 0.5 * self.dt, 2 * self.nt, self.window, self.model, self.m2)


@dataclass
class FpeSolution:
    """Moving-part density on the grid, with the weight of the atom at x = 0.

    Attributes:
        grid (FpeGrid): Grid of the solution.
        density (array): nx x (nt + 1) moving-part density.
        p0_series (array): Weight of the walkers still at rest, per step.
    """
    grid: FpeGrid
    density: np.ndarray
    p0_series: np.ndarray

    def __post_init__(self):
        shape = (self.grid.nx, self.grid.nt + 1)
        if self.density.shape != shape:
            raise ValueError(f"Density shape {self.density.shape} does not match the grid {shape}.")
        if self.p0_series.shape != (self.grid.nt + 1,):
            raise ValueError("The motionless weights need one entry per time step.")

    @property
    def moved_mass(self):
        return self.grid.dx * np.sum(self.density, axis=0)

    @property
    def second_moments(self):
        """<x^2> per step. The atom sits at x = 0 and does not contribute."""
        return self.grid.dx * (self.grid.x ** 2) @ self.density

    @property
    def fourth_moments(self):
        return self.grid.dx * (self.grid.x ** 4) @ self.density

    def at(self, x):
        """Terminal density linearly interpolated at x."""
        return np.interp(x, self.grid.x, self.density[:, -1], left=0., right=0.)

    def to_dataframe(self, stride=1):
        """Long table (t, x, density), keeping every stride-th time step."""
        times = self.grid.times[::stride]
        t_col, x_col = np.meshgrid(times, self.grid.x, indexing="ij")
        return pd.DataFrame({"t": t_col.ravel(), "x": x_col.ravel(),
                             "density": self.density[:, ::stride].T.ravel()})

    def to_csv(self, path, stride=1):
        self.to_dataframe(stride).to_csv(path, index=False)

    def summary(self):
        """JSON-ready description of the run, with the moments per step."""
        grid = self.grid
        return {"alpha": grid.model.alpha, "lambda": grid.model.lam, "t_a": grid.window.t_a, "t": grid.window.t,
                "m2": grid.m2, "nx": grid.nx, "nt": grid.nt, "dx": grid.dx, "dt": grid.dt,
                "steps": [{"t": float(t), "p0": float(p0), "moved_mass": float(m), "second_moment": float(m2),
                           "fourth_moment": float(m4)}
                          for t, p0, m, m2, m4 in zip(grid.times, self.p0_series, self.moved_mass,
                                                      self.second_moments, self.fourth_moments)]}

    def to_json(self, path):
        with open(path, "w") as f:
            json.dump(self.summary(), f, indent=2)

    def to_file(self, path):
        """Write the solution to an HDF5 file."""
        grid = self.grid
        with h5py.File(path, "w") as f:
            f.create_dataset("x", data=grid.x)
            f.create_dataset("t", data=grid.times)
            f.create_dataset("density", data=self.density)
            f.create_dataset("p0_series", data=self.p0_series)
            f.attrs.update({"alpha": grid.model.alpha, "lambda": grid.model.lam, "t_a": grid.window.t_a,
                            "m2": grid.m2})


def moved_fraction(model, t_a, dt, nt):
    """Fraction W(t_k) = int_0^t_k omega(t_a, tau) dtau of walkers that have
    jumped in (t_a, t_a + t_k], on the grid t_k = k dt.

    The first cell carries the tau^(-alpha) behaviour of omega and uses the
    graded rule, the others a fixed Gauss-Legendre rule per cell.

    Returns:
        array: W at the nt + 1 grid times.
    """
    alpha = model.alpha

    def regular_part(tau):
        return tau ** alpha * forward_waiting_pdf(model, t_a, tau)

    cells = np.zeros(nt + 1)
    cells[1] = graded_integral(regular_part, dt, 1. - alpha, atol=1e-10, rtol=1e-6)
    if nt > 1:
        v, w = roots_legendre(N_CELL_NODES)
        nodes = dt * np.arange(1, nt)[:, None] + 0.5 * dt * (v + 1.)
        values = forward_waiting_pdf(model, t_a, nodes.ravel()).reshape(nodes.shape)
        cells[2:] = 0.5 * dt * values @ w
    return np.minimum(np.cumsum(cells), 1.)


class TemperedFpeSolver:
    """Time marching of the aging Fokker-Planck equation.

    Users set the options through the __init__ method and call simulate,
    which builds the source term on first use.

    Attributes:
        grid (FpeGrid): Space-time grid.
        retain_memory_laplacian (bool): Keep the memory Laplacian term. Off by
            default: kept, it turns the diffusion coefficient into D(1 - a)
            with a = dt^(-alpha) - lambda^alpha, negative on any grid with
            a > 1, and the marching blows up (InstabilityError). Dropped, the motionless weight follows the
            moved fraction W exactly and the second moment equals M2 <n_a> of
            the small-u law.
        memory_window (int): Number of past steps kept in the history sum,
            None for the full history.
        mass_tolerance (float): Largest accepted gap between the moved mass
            on the grid and the moved fraction W.
        negativity_tolerance (float): Largest accepted negative density.
        verbose (bool): Print the marching progress.
    """

    def __init__(self, opt_dict):

        default_options = {"grid": None,
                           "retain_memory_laplacian": False,
                           "memory_window": None,
                           "mass_tolerance": MASS_TOLERANCE,
                           "negativity_tolerance": NEGATIVITY_TOLERANCE,
                           "verbose": False}

        # Initialize with default values
        self.__dict__ = default_options
        # Overwrite default values with user-provided ones, if they correspond to a valid keyword
        for k, v in opt_dict.items():
            if k in default_options:
                setattr(self, k, v)
            else:
                raise KeyError(f"Keyword :: {k}, not available in {self.__class__.__name__}.")

        if self.grid is None:
            raise ValueError(f"A grid must be provided when instantiating {self.__class__.__name__}.")
        if self.memory_window is not None and self.memory_window < 1:
            raise ValueError(f"Memory window must be a positive number of steps, got {self.memory_window}.")

        self.moved = None

    def build(self):
        """Compute the moved fraction W on the time grid."""
        grid = self.grid
        self.moved = moved_fraction(grid.model, grid.window.t_a, grid.dt, grid.nt)

    def _check_step(self, k, p):
        grid = self.grid
        lowest = np.min(p)
        if lowest < -self.negativity_tolerance:
            raise InstabilityError(f"Negative density {lowest:.3e} at step {k} (t = {k * grid.dt:.6g}).")
        drift = abs(grid.dx * np.sum(p) - self.moved[k])
        if drift > self.mass_tolerance:
            raise InstabilityError(f"Mass drift {drift:.3e} at step {k} (t = {k * grid.dt:.6g}); "
                                   f"widen the domain beyond x_max = {grid.x_max}.")

    def simulate(self):
        """March the density over the grid.

        Returns:
            FpeSolution: Moving-part density and motionless weights.

        Raises:
            InstabilityError: If the density turns negative or mass leaks
                through the boundaries beyond the tolerances.
        """
        if self.moved is None:
            self.build()
        grid, moved = self.grid, self.moved
        alpha, nt, dx = grid.model.alpha, grid.nt, grid.dx

        c = grid.dt ** (-alpha)
        a = c - grid.model.lam_alpha
        d = grid.diffusivity
        kappa = d * (1. - a) if self.retain_memory_laplacian else d

        # Interior nodes only, the boundary values being zero.
        n_in = grid.nx - 2
        center = n_in // 2
        banded = np.empty((3, n_in))
        banded[0] = banded[2] = -kappa / dx ** 2
        banded[1] = a + 2. * kappa / dx ** 2

        weights = gl_tempered_weights(alpha, grid.model.lam, grid.dt, nt)
        interior = np.zeros((nt + 1, n_in))
        report_every = max(nt // 10, 1)

        for k in range(1, nt + 1):
            n_hist = k if self.memory_window is None else min(k, self.memory_window)
            w = weights[1:n_hist + 1]
            history = w @ interior[k - n_hist:k][::-1]
            history_moved = w @ moved[k - n_hist:k][::-1]

            rhs = -c * history
            rhs[center] += (a * moved[k] + c * history_moved) / dx
            if self.retain_memory_laplacian:
                laplacian = -2. * history
                laplacian[1:] += history[:-1]
                laplacian[:-1] += history[1:]
                rhs -= d * c * laplacian / dx ** 2

            interior[k] = solve_banded((1, 1), banded, rhs)
            self._check_step(k, interior[k])

            if self.verbose and k % report_every == 0:
                print(f"\tStep {k}/{nt}: moved mass {dx * np.sum(interior[k]):.6f}, "
                      f"W = {moved[k]:.6f}")

        density = np.zeros((grid.nx, nt + 1))
        density[1:-1] = interior.T
        p0_series = 1. - dx * np.sum(density, axis=0)
        return FpeSolution(grid, density, p0_series)


def solve_tempered_fpe(grid, **options):
    """Solve the aging Fokker-Planck equation on a grid.

    Args:
        grid (FpeGrid): Space-time grid.
        **options: Options of TemperedFpeSolver.

    Returns:
        FpeSolution: Moving-part density and motionless weights.
    """
    return TemperedFpeSolver({"grid": grid, **options}).simulate()


@dataclass
class ConvergenceStudy:
    """Terminal second moments over successively refined grids.

    Attributes:
        steps (list): Time steps, decreasing.
        second_moments (list): Terminal second moment per grid.
        order (float): Observed convergence order in dt.
        extrapolated (float): Richardson extrapolation to dt = 0.
    """
    steps: list
    second_moments: list
    order: float
    extrapolated: float


def grid_convergence_study(grid, n_levels=3, **options):
    """Halve dt and dx n_levels - 1 times from a base grid and measure the
    convergence of the terminal second moment.

    Args:
        grid (FpeGrid): Coarsest grid.
        n_levels (int): Number of grids, at least 3.
        **options: Options of TemperedFpeSolver.

    Returns:
        ConvergenceStudy: Steps, moments and observed order.
    """
    if n_levels < 3:
        raise ValueError(f"The observed order needs at least 3 grids, got {n_levels}.")

    steps, moments = list(), list()
    for _ in range(n_levels):
        solution = solve_tempered_fpe(grid, **options)
        steps.append(grid.dt)
        moments.append(float(solution.second_moments[-1]))
        grid = grid.refined()

    order = observed_order(moments[-3:], steps[-3:])
    return ConvergenceStudy(steps, moments, order, richardson(moments[-2:], steps[-2:], order=1.))
