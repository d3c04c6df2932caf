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

import os
import json
import tempfile
import unittest

import h5py
import numpy as np
import pandas as pd
from scipy.integrate import cumulative_trapezoid

from tempered_actrw.helpers.exceptions import InstabilityError
from tempered_actrw.toolboxes.sampling import WaitingTimeModel, JumpModel
from tempered_actrw.algorithms.renewal import AgingWindow, survival_probability_theory
from tempered_actrw.algorithms.actrw import msd_theory, propagator_mc
from tempered_actrw.algorithms.fokker_planck import FpeGrid, TemperedFpeSolver, moved_fraction, solve_tempered_fpe, \
    grid_convergence_study


GAUSSIAN = JumpModel("gaussian", m2=1.)


def small_grid(model=WaitingTimeModel(0.6, 0.1), window=AgingWindow(1., 2.), nt=20, nx=41, x_max=10.):
    return FpeGrid(x_max, nx, window.t / nt, nt, window, model)


class FpeGridTest(unittest.TestCase):

    def test_validation(self):
        """Test that malformed grids are rejected."""
        model, window = WaitingTimeModel(0.6, 0.1), AgingWindow(1., 2.)
        self.assertRaises(ValueError, FpeGrid, 10., 40, 0.1, 20, window, model)
        self.assertRaises(ValueError, FpeGrid, 10., 41, 0.1, 10, window, model)
        self.assertRaises(ValueError, FpeGrid, -1., 41, 0.1, 20, window, model)
        self.assertRaises(ValueError, FpeGrid, 10., 41, 2., 1, window, WaitingTimeModel(0.6, 1.))

    def test_geometry(self):
        """Test the node positions and the refined grid."""
        grid = small_grid()
        self.assertEqual(grid.x_min, -10.)
        self.assertAlmostEqual(grid.dx, 0.5, places=14)
        self.assertEqual(grid.x[20], 0.)
        self.assertAlmostEqual(grid.times[-1], 2., places=12)

        fine = grid.refined()
        self.assertEqual((fine.nx, fine.nt), (81, 40))
        self.assertAlmostEqual(fine.dx, 0.25, places=14)
        self.assertAlmostEqual(fine.dt, 0.05, places=14)


class MovedFractionTest(unittest.TestCase):

    def test_against_survival(self):
        """Test that W = 1 - P0 of the small-u law."""
        model = WaitingTimeModel(0.6, 0.1)
        moved = moved_fraction(model, 1., 0.1, 20)
        self.assertEqual(moved[0], 0.)
        self.assertTrue(np.all(np.diff(moved) > 0.))
        p0 = survival_probability_theory(model, AgingWindow(1., 2.), "exact", small_u_law=True)
        self.assertAlmostEqual(moved[-1], 1. - p0, delta=1e-4)


class TemperedFpeSolverTest(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.model = WaitingTimeModel(0.6)
        cls.window = AgingWindow(3., 50.)
        cls.grid = FpeGrid.from_window(cls.model, cls.window, nt=500)
        cls.solution = solve_tempered_fpe(cls.grid)

    def test_options(self):
        """Test the handling of the solver options."""
        self.assertRaises(KeyError, TemperedFpeSolver, {"grid": small_grid(), "n_steps": 3})
        self.assertRaises(ValueError, TemperedFpeSolver, {"memory_window": 10})
        self.assertRaises(ValueError, TemperedFpeSolver, {"grid": small_grid(), "memory_window": 0})
        self.assertFalse(TemperedFpeSolver({"grid": small_grid()}).retain_memory_laplacian)

    def test_zero_time_slice(self):
        """Test that nothing has moved at t = 0."""
        self.assertTrue(np.all(self.solution.density[:, 0] == 0.))
        self.assertEqual(self.solution.p0_series[0], 1.)

    def test_total_mass(self):
        """Test that moving mass and motionless weight add up to one."""
        total = self.solution.moved_mass + self.solution.p0_series
        np.testing.assert_allclose(total, 1., atol=1e-12)

    def test_non_negative(self):
        """Test the sign of the density."""
        self.assertGreaterEqual(np.min(self.solution.density), -1e-8)

    def test_symmetry(self):
        """Test that the density is even in x."""
        density = self.solution.density
        self.assertLessEqual(np.max(np.abs(density - density[::-1])), 1e-10 * np.max(density))

    def test_second_moment(self):
        """Test the second moment against the mean squared displacement of
        the untempered walk.
        """
        expected = msd_theory(self.model, GAUSSIAN, self.window, "exact", small_u_law=True)
        self.assertAlmostEqual(self.solution.second_moments[-1] / expected, 1., delta=0.05)

    def test_mass_bridge(self):
        """Test that the motionless weight follows the survival probability of the small-u law."""
        for k in (20, 100, 500):
            expected = survival_probability_theory(self.model, AgingWindow(3., self.grid.times[k]), "exact",
                                                   small_u_law=True)
            self.assertAlmostEqual(self.solution.p0_series[k] / expected, 1., delta=0.02)

    def test_exports(self):
        """Test the CSV, JSON and HDF5 exports."""
        solution = solve_tempered_fpe(small_grid())
        with tempfile.TemporaryDirectory() as folder:
            csv_path = os.path.join(folder, "fpe.csv")
            solution.to_csv(csv_path, stride=5)
            table = pd.read_csv(csv_path)
            self.assertEqual(list(table.columns), ["t", "x", "density"])
            self.assertEqual(len(table), 5 * 41)

            json_path = os.path.join(folder, "fpe.json")
            solution.to_json(json_path)
            with open(json_path) as f:
                summary = json.load(f)
            self.assertEqual(len(summary["steps"]), 21)
            self.assertAlmostEqual(summary["steps"][-1]["p0"], solution.p0_series[-1], places=12)

            h5_path = os.path.join(folder, "fpe.h5")
            solution.to_file(h5_path)
            with h5py.File(h5_path, "r") as f:
                self.assertEqual(f["density"].shape, (41, 21))
                self.assertAlmostEqual(f.attrs["alpha"], 0.6)


class TemperedPropagatorTest(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.model = WaitingTimeModel(0.6, 1e-3)
        cls.window = AgingWindow(3., 500.)
        cls.grid = FpeGrid.from_window(cls.model, cls.window, nt=500)
        cls.solution = solve_tempered_fpe(cls.grid)

    def test_mass_bridge_exact_law(self):
        """Test the motionless weight against the survival probability of the exact law."""
        for k in (250, 500):
            expected = survival_probability_theory(self.model, AgingWindow(3., self.grid.times[k]), "exact")
            self.assertAlmostEqual(self.solution.p0_series[k], expected, delta=5e-3)

    def test_against_monte_carlo(self):
        """Test the terminal density against a Monte Carlo histogram of the walk."""
        histogram = propagator_mc(self.model, GAUSSIAN, self.window, 50000, seed=11, bins=41)
        x = self.grid.x
        cumulative = cumulative_trapezoid(self.solution.density[:, -1], x, initial=0.)
        masses = np.diff(np.interp(histogram.bin_edges, x, cumulative))
        self.assertLess(np.sum(np.abs(masses - histogram.masses)), 0.05)


class SolverVariantsTest(unittest.TestCase):

    def test_memory_window(self):
        """Test that the truncated history keeps the moved mass and alters the shape."""
        grid = small_grid()
        full = solve_tempered_fpe(grid)
        truncated = solve_tempered_fpe(grid, memory_window=5)
        np.testing.assert_allclose(truncated.p0_series, full.p0_series, atol=1e-9)
        self.assertGreater(np.max(np.abs(truncated.density - full.density)), 1e-6)

    def test_retained_memory_laplacian(self):
        """Test that retaining the memory Laplacian triggers the instability monitor."""
        grid = small_grid(x_max=20., nx=161)
        with self.assertRaises(InstabilityError):
            solve_tempered_fpe(grid, retain_memory_laplacian=True)

    def test_grid_convergence(self):
        """Test the first-order convergence of the terminal second moment."""
        grid = FpeGrid(16., 41, 0.2, 20, AgingWindow(0., 4.), WaitingTimeModel(0.6, 0.1))
        study = grid_convergence_study(grid)
        self.assertEqual(len(study.second_moments), 3)
        self.assertGreaterEqual(study.order, 0.8)
        self.assertAlmostEqual(study.extrapolated / study.second_moments[-1], 1., delta=0.05)


if __name__ == "__main__":
    unittest.main()
