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

"""Command-line runner of the experiments:

    tempered-actrw run <config> [--seed N] [--threads N] [--out DIR] [--verbose]

Each run writes results.csv, one row per (curve, t) cell (per bin for the
propagators), summary.json with the configuration echo and the built-in
Monte Carlo versus theory checks, and plot.svg when matplotlib is installed.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure
(non-convergence, unstable Fokker-Planck marching, renewal cap), 4 failed
built-in check.

For the fpe experiment the theory_exact column holds the solver output,
compared against Monte Carlo and the closed asymptotic forms.
"""

import os
import sys
import json
import time
import argparse
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.integrate import cumulative_trapezoid
from scipy.special import gamma

from tempered_actrw._version import __version__
from tempered_actrw.helpers.exceptions import ConfigurationError, ConvergenceError, RegimeError, \
    SimulationCapError, ToleranceError
from tempered_actrw.helpers.utils import plotting_available
from tempered_actrw.toolboxes.laplace import waiting_time_lt, inverse_laplace, mean_waiting_time
from tempered_actrw.toolboxes.post_processing import mean_and_error
from tempered_actrw.toolboxes.sampling import sample_tempered_waiting, trajectory_rng, derived_seed
from tempered_actrw.toolboxes.special_functions import upper_incomplete_gamma
from tempered_actrw.algorithms.renewal import AgingWindow, EnsembleResult, classify_regime, count_ensemble, \
    mean_renewals_theory, survival_probability_theory
from tempered_actrw.algorithms.actrw import PropagatorRegime, ResponseExperiment, walk_ensemble, \
    histogram_from_walks, msd_theory, propagator_theory, fluctuation_response_theory, response_experiment
from tempered_actrw.algorithms.fokker_planck import FpeGrid, solve_tempered_fpe
from tempered_actrw.experiments.config import ExperimentConfig


RESULT_COLUMNS = ("experiment", "quantity", "alpha", "lambda", "t_a", "t", "x", "mc_estimate", "std_error",
                  "theory_exact", "theory_asymptotic", "regime")
FLOAT_FORMAT = "%.10g"

EXIT_OK = 0
EXIT_CONFIGURATION = 2
EXIT_NUMERICS = 3
EXIT_TOLERANCE = 4

# Half-width of the propagator bins, in units of the root mean squared displacement.
PROPAGATOR_HALF_WIDTH = 6.
FPE_L1_TOLERANCE = 0.05
FPE_MASS_TOLERANCE = 0.02


@dataclass
class ToleranceCheck:
    """Comparison of an estimate with its expected value."""
    name: str
    value: float
    expected: float
    tolerance: float

    @property
    def passed(self):
        return bool(abs(self.value - self.expected) <= self.tolerance)

    def as_dict(self):
        return {"name": self.name, "value": float(self.value), "expected": float(self.expected),
                "tolerance": float(self.tolerance), "passed": self.passed}


@dataclass
class ExperimentRun:
    """Rows of results.csv, built-in checks and the Fokker-Planck solutions
    to export.
    """
    rows: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    solutions: list = field(default_factory=list)

    @property
    def frame(self):
        return pd.DataFrame(self.rows, columns=list(RESULT_COLUMNS))

    @property
    def failed_checks(self):
        return [check for check in self.checks if not check.passed]


def _row(cfg, quantity, model, t_a, t, x=np.nan, mc=None, exact=np.nan, asymptotic=np.nan, regime=""):
    estimate, error = (np.nan, np.nan) if mc is None else mc
    return {"experiment": cfg.experiment, "quantity": quantity, "alpha": model.alpha, "lambda": model.lam,
            "t_a": t_a, "t": t, "x": x, "mc_estimate": estimate, "std_error": error, "theory_exact": exact,
            "theory_asymptotic": asymptotic, "regime": regime}


def _asymptotic(function, *args):
    try:
        return function(*args, mode="asymptotic")
    except RegimeError:
        return np.nan


def _msd_asymptotic(model, jump, window):
    """Asymptotic mean squared displacement, NaN for biased jumps which only have the exact form."""
    return _asymptotic(msd_theory, model, jump, window) if jump.mean == 0. else np.nan


def _statistical_check(cfg, name, estimate, error, expected):
    tolerance = cfg.sigma_tolerance * error + cfg.relative_tolerance * abs(expected) + cfg.absolute_tolerance
    return ToleranceCheck(name, estimate, expected, tolerance)


def _curves(cfg):
    """(index, model, t_a) for every curve of the experiment."""
    index = 0
    for model in cfg.models:
        for t_a in cfg.t_a:
            yield index, model, t_a
            index += 1


def _waiting_survival_tail(model, t):
    """Survival function of the small-u law, lambda^alpha Gamma(-alpha, lambda t) / (-Gamma(-alpha))."""
    alpha, lam = model.alpha, model.lam
    if lam == 0.:
        return t ** (-alpha) / gamma(1. - alpha)
    return model.lam_alpha * upper_incomplete_gamma(-alpha, lam * t) / (-gamma(-alpha))


def run_sample(cfg):
    """Survival function of the sampled waiting times, and their mean when finite."""
    run = ExperimentRun()
    for index, model in enumerate(cfg.models):
        tau = sample_tempered_waiting(model, trajectory_rng(cfg.seed, index), size=cfg.n_traj)
        for t in cfg.t:
            mc = EnsembleResult.from_indicator(tau > t, cfg.seed)
            exact = inverse_laplace(lambda u: (1. - waiting_time_lt(model, u)) / u, t)
            run.rows.append(_row(cfg, "waiting_survival", model, np.nan, t, mc=(mc.estimate, mc.std_error),
                                 exact=exact, asymptotic=_waiting_survival_tail(model, t)))
            run.checks.append(_statistical_check(cfg, f"waiting_survival(lambda={model.lam}, t={t:.6g})",
                                                 mc.estimate, mc.std_error, exact))
        if model.lam > 0.:
            mean, error = mean_and_error(tau)
            run.checks.append(_statistical_check(cfg, f"mean_waiting_time(lambda={model.lam})", mean, error,
                                                 mean_waiting_time(model)))
    return run


def _count_curves(cfg, quantity):
    run = ExperimentRun()
    for index, model, t_a in _curves(cfg):
        seed = derived_seed(cfg.seed, index)
        counts = count_ensemble(model, t_a, cfg.t_grid, cfg.n_traj, seed, cfg.n_workers, cfg.max_renewals)
        for k, t in enumerate(cfg.t):
            window = AgingWindow(t_a, t)
            if quantity == "mean_renewals":
                mc = EnsembleResult.from_samples(counts[:, k], seed)
                exact = mean_renewals_theory(model, window)
                asymptotic = _asymptotic(mean_renewals_theory, model, window)
            else:
                mc = EnsembleResult.from_indicator(counts[:, k] == 0, seed)
                exact = survival_probability_theory(model, window)
                asymptotic = _asymptotic(survival_probability_theory, model, window)
            run.rows.append(_row(cfg, quantity, model, t_a, t, mc=(mc.estimate, mc.std_error), exact=exact,
                                 asymptotic=asymptotic, regime=classify_regime(model, window).label))
            run.checks.append(_statistical_check(cfg, f"{quantity}(lambda={model.lam}, t_a={t_a:.6g}, t={t:.6g})",
                                                 mc.estimate, mc.std_error, exact))
        if cfg.verbose:
            print(f"\t{quantity}: lambda = {model.lam}, t_a = {t_a} done")
    return run


def run_renewal(cfg):
    """Mean number of renewals <n_a(t_a, t)>."""
    return _count_curves(cfg, "mean_renewals")


def run_survival(cfg):
    """Survival probability P0(t_a, t)."""
    return _count_curves(cfg, "survival_probability")


def run_msd(cfg):
    """Mean squared displacement of the aging walk."""
    run = ExperimentRun()
    jump = cfg.jump_model
    for index, model, t_a in _curves(cfg):
        seed = derived_seed(cfg.seed, index)
        x, _ = walk_ensemble(model, jump, t_a, cfg.t_grid, cfg.n_traj, seed, cfg.n_workers, cfg.max_renewals)
        for k, t in enumerate(cfg.t):
            window = AgingWindow(t_a, t)
            mc = EnsembleResult.from_samples(x[:, k] ** 2, seed)
            exact = msd_theory(model, jump, window)
            run.rows.append(_row(cfg, "msd", model, t_a, t, mc=(mc.estimate, mc.std_error), exact=exact,
                                 asymptotic=_msd_asymptotic(model, jump, window),
                                 regime=classify_regime(model, window).label))
            run.checks.append(_statistical_check(cfg, f"msd(lambda={model.lam}, t_a={t_a:.6g}, t={t:.6g})",
                                                 mc.estimate, mc.std_error, exact))
    return run


def _closed_propagator(model, jump, x, window):
    cell = classify_regime(model, window)
    if cell.weak_aging:
        return propagator_theory(model, jump, x, window, PropagatorRegime.weak_aging)
    if cell.strong_aging:
        return propagator_theory(model, jump, x, window, PropagatorRegime.strong_aging)
    return np.full(len(x), np.nan)


def _propagator_rows(cfg, run, quantity, model, histogram, n_traj, theory):
    widths = np.diff(histogram.bin_edges)
    errors = np.sqrt(histogram.masses * (1. - histogram.masses) / n_traj) / widths
    window = histogram.window
    label = classify_regime(model, window).label
    for xi, density, error, exact, asymptotic in zip(histogram.centers, histogram.density, errors, *theory):
        run.rows.append(_row(cfg, quantity, model, window.t_a, window.t, x=xi, mc=(density, error), exact=exact,
                             asymptotic=asymptotic, regime=label))


def run_propagator(cfg):
    """Binned propagator of the movers and weight of the motionless atom."""
    run = ExperimentRun()
    jump = cfg.jump_model
    for index, model, t_a in _curves(cfg):
        seed = derived_seed(cfg.seed, index)
        x, counts = walk_ensemble(model, jump, t_a, cfg.t_grid, cfg.n_traj, seed, cfg.n_workers, cfg.max_renewals)
        for k, t in enumerate(cfg.t):
            window = AgingWindow(t_a, t)
            half_width = PROPAGATOR_HALF_WIDTH * np.sqrt(msd_theory(model, jump, window))
            edges = np.linspace(-half_width, half_width, cfg.bins + 1)
            histogram = histogram_from_walks(x[:, k], counts[:, k] >= 1, window, edges)
            closed = _closed_propagator(model, jump, histogram.centers, window)
            _propagator_rows(cfg, run, "propagator_density", model, histogram, cfg.n_traj,
                             (np.full(cfg.bins, np.nan), closed))

            atom = EnsembleResult.from_indicator(counts[:, k] == 0, seed)
            exact = survival_probability_theory(model, window)
            run.rows.append(_row(cfg, "motionless_weight", model, t_a, t, x=0., mc=(atom.estimate, atom.std_error),
                                 exact=exact, asymptotic=_asymptotic(survival_probability_theory, model, window),
                                 regime=classify_regime(model, window).label))
            run.checks.append(_statistical_check(cfg, f"motionless_weight(lambda={model.lam}, t_a={t_a:.6g}, "
                                                      f"t={t:.6g})", atom.estimate, atom.std_error, exact))
    return run


def run_response(cfg):
    """Fluctuation-response experiment of the biased lattice walk, one t_b per grid time."""
    run = ExperimentRun()
    for index, model, t_a in _curves(cfg):
        for k, t_b in enumerate(cfg.t):
            seed = derived_seed(cfg.seed, index * len(cfg.t) + k)
            experiment = ResponseExperiment(model, c=cfg.c, h=cfg.h, t_a=t_a, t_b=t_b)
            record = response_experiment(experiment, cfg.n_traj, seed, cfg.n_workers, max_renewals=cfg.max_renewals,
                                         verbose=cfg.verbose)
            window = AgingWindow(t_a, t_b)
            label = classify_regime(model, window).label
            try:
                expected_ratio = fluctuation_response_theory(model, t_a, t_b)
            except RegimeError:
                expected_ratio = np.nan
            run.rows.append(_row(cfg, "count_ratio", model, t_a, t_b,
                                 mc=(record.count_ratio, record.count_ratio_error),
                                 asymptotic=expected_ratio, regime=label))
            if np.isfinite(expected_ratio):
                run.checks.append(_statistical_check(cfg, f"count_ratio(lambda={model.lam}, t_a={t_a:.6g}, "
                                                          f"t_b={t_b:.6g})", record.count_ratio,
                                                     record.count_ratio_error, expected_ratio))

            if cfg.h > 0.:
                x_b, r2 = record.mean_x_b, record.mean_r2_aging
                ratio_error = abs(record.einstein_ratio) * np.hypot(x_b.std_error / x_b.estimate,
                                                                    r2.std_error / r2.estimate)
                run.rows.append(_row(cfg, "einstein_ratio", model, t_a, t_b,
                                     mc=(record.einstein_ratio, ratio_error), exact=1., regime=label))
                run.rows.append(_row(cfg, "f_r_displacement", model, t_a, t_b, mc=(record.f_r_displacement, np.nan),
                                     asymptotic=expected_ratio - 1., regime=label))
                run.checks.append(_statistical_check(cfg, f"einstein_ratio(lambda={model.lam}, t_a={t_a:.6g}, "
                                                          f"t_b={t_b:.6g})", record.einstein_ratio, ratio_error, 1.))
    return run


def run_fpe(cfg):
    """Fokker-Planck solution over the whole grid, against Monte Carlo walks."""
    run = ExperimentRun()
    jump = cfg.jump_model
    for index, model, t_a in _curves(cfg):
        window = AgingWindow(t_a, cfg.t[-1])
        grid = FpeGrid.from_window(model, window, cfg.nt, cfg.nx, m2=jump.second_moment)
        solution = solve_tempered_fpe(grid, verbose=cfg.verbose)
        run.solutions.append(solution)

        seed = derived_seed(cfg.seed, index)
        x, counts = walk_ensemble(model, jump, t_a, cfg.t_grid, cfg.n_traj, seed, cfg.n_workers, cfg.max_renewals)
        steps = np.clip(np.rint(cfg.t_grid / grid.dt).astype(int), 0, grid.nt)
        for k, (t, step) in enumerate(zip(cfg.t, steps)):
            t_window = AgingWindow(t_a, t)
            label = classify_regime(model, t_window).label
            at_rest = EnsembleResult.from_indicator(counts[:, k] == 0, seed)
            run.rows.append(_row(cfg, "fpe_motionless_weight", model, t_a, t, x=0.,
                                 mc=(at_rest.estimate, at_rest.std_error), exact=solution.p0_series[step],
                                 asymptotic=_asymptotic(survival_probability_theory, model, t_window), regime=label))
            squared = EnsembleResult.from_samples(x[:, k] ** 2, seed)
            run.rows.append(_row(cfg, "fpe_second_moment", model, t_a, t, mc=(squared.estimate, squared.std_error),
                                 exact=solution.second_moments[step],
                                 asymptotic=_msd_asymptotic(model, jump, t_window), regime=label))

        # Terminal density, averaged over the Monte Carlo bins.
        half_width = PROPAGATOR_HALF_WIDTH * np.sqrt(solution.second_moments[-1])
        edges = np.linspace(-half_width, half_width, cfg.bins + 1)
        histogram = histogram_from_walks(x[:, -1], counts[:, -1] >= 1, window, edges)
        cumulative = cumulative_trapezoid(solution.density[:, -1], grid.x, initial=0.)
        solver_masses = np.diff(np.interp(edges, grid.x, cumulative))
        closed = _closed_propagator(model, jump, histogram.centers, window)
        _propagator_rows(cfg, run, "fpe_density", model, histogram, cfg.n_traj,
                         (solver_masses / np.diff(edges), closed))

        l1 = float(np.sum(np.abs(solver_masses - histogram.masses)))
        run.checks.append(ToleranceCheck(f"fpe_l1_distance(lambda={model.lam}, t_a={t_a:.6g})", l1, 0.,
                                         FPE_L1_TOLERANCE))
        p0 = survival_probability_theory(model, window, small_u_law=True)
        run.checks.append(ToleranceCheck(f"fpe_mass_bridge(lambda={model.lam}, t_a={t_a:.6g})",
                                         solution.p0_series[-1], p0, FPE_MASS_TOLERANCE * p0))
    return run


EXPERIMENT_RUNNERS = {"sample": run_sample, "renewal": run_renewal, "survival": run_survival, "msd": run_msd,
                      "propagator": run_propagator, "response": run_response, "fpe": run_fpe}


def run_experiment(cfg):
    """Run the experiment described by a configuration.

    Args:
        cfg (ExperimentConfig): Validated configuration.

    Returns:
        ExperimentRun: Rows, checks and solver outputs.
    """
    return EXPERIMENT_RUNNERS[cfg.experiment](cfg)


def write_outputs(cfg, run, wall_time):
    """Write results.csv, summary.json, the Fokker-Planck solutions and the
    plot into cfg.output_dir.

    Returns:
        list: Paths of the written files.
    """
    os.makedirs(cfg.output_dir, exist_ok=True)
    paths = [os.path.join(cfg.output_dir, "results.csv"), os.path.join(cfg.output_dir, "summary.json")]
    run.frame.to_csv(paths[0], index=False, float_format=FLOAT_FORMAT)

    summary = {"version": __version__, "config": cfg.as_dict(), "seed": cfg.seed, "n_workers": cfg.n_workers,
               "wall_time": wall_time, "checks": [check.as_dict() for check in run.checks],
               "passed": not run.failed_checks}
    with open(paths[1], "w", encoding="utf-8") as f:
        json.dump(summary, f, indent=2)

    for i, solution in enumerate(run.solutions):
        suffix = "" if len(run.solutions) == 1 else f"_{i}"
        path = os.path.join(cfg.output_dir, f"fpe_solution{suffix}.csv")
        solution.to_csv(path, stride=max(solution.grid.nt // 100, 1))
        paths.append(path)

    if cfg.plot and plotting_available:
        from tempered_actrw.experiments.plotting import plot_results
        path = os.path.join(cfg.output_dir, "plot.svg")
        plot_results(run.frame, path)
        paths.append(path)
    return paths


def run(cfg):
    """Run an experiment and write its outputs.

    Raises:
        ToleranceError: After writing the outputs, if a built-in check failed.
    """
    start = time.perf_counter()
    result = run_experiment(cfg)
    paths = write_outputs(cfg, result, time.perf_counter() - start)
    if cfg.verbose:
        print("\n".join(f"\tWrote {path}" for path in paths))

    failed = result.failed_checks
    if failed:
        names = ", ".join(check.name for check in failed)
        raise ToleranceError(f"{len(failed)} of {len(result.checks)} checks failed: {names}.")
    return result


def build_parser():
    parser = argparse.ArgumentParser(prog="tempered-actrw",
                                     description="Monte Carlo and theory of the tempered aging random walk.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)
    run_parser = commands.add_parser("run", help="Run the experiment described by a configuration file.")
    run_parser.add_argument("config", help="Path to the key = value configuration file.")
    run_parser.add_argument("--seed", type=int, default=None, help="Override the base seed.")
    run_parser.add_argument("--threads", type=int, default=None, dest="n_workers",
                            help="Worker processes (default: TACTRW_N_WORKERS or 1).")
    run_parser.add_argument("--out", default=None, dest="output_dir", help="Output folder.")
    run_parser.add_argument("--verbose", action="store_true", default=None, help="Print progress.")
    return parser


def main(argv=None):
    """Entry point of the tempered-actrw command.

    Returns:
        int: Process exit code.
    """
    args = build_parser().parse_args(argv)
    try:
        cfg = ExperimentConfig.from_file(args.config, seed=args.seed, n_workers=args.n_workers,
                                         output_dir=args.output_dir, verbose=args.verbose)
    except (ConfigurationError, OSError) as error:
        print(f"Configuration error: {error}", file=sys.stderr)
        return EXIT_CONFIGURATION

    try:
        run(cfg)
    except (ConvergenceError, SimulationCapError) as error:
        print(f"Numerical failure ({error.__class__.__name__}): {error}", file=sys.stderr)
        return EXIT_NUMERICS
    except ToleranceError as error:
        print(f"Check failure: {error}", file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
