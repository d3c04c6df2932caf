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

"""Line charts of results.csv: Monte Carlo estimates with error bars, the
exact theory as solid lines and the asymptotic forms as dashed lines. One
panel per quantity. Requires matplotlib, an optional dependency.
"""

import numpy as np

from tempered_actrw.helpers.utils import plotting_available

if plotting_available:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt


def _abscissa(frame):
    """Bin centers for the propagators, observation times otherwise."""
    return "x" if frame["x"].notna().all() and frame["x"].nunique() > 1 else "t"


def _use_log_axes(values):
    values = values[np.isfinite(values)]
    return len(values) > 1 and np.all(values > 0.) and values.max() / values.min() > 100.


def plot_results(frame, path):
    """Draw every curve of a results table into an SVG file.

    Args:
        frame (pandas.DataFrame): Content of results.csv.
        path (str): Output file.

    Raises:
        ModuleNotFoundError: If matplotlib is not installed.
    """
    if not plotting_available:
        raise ModuleNotFoundError("Plotting requires matplotlib.")

    quantities = list(dict.fromkeys(frame["quantity"]))
    fig, axes = plt.subplots(len(quantities), 1, figsize=(6.4, 4.2 * len(quantities)), squeeze=False)
    for ax, quantity in zip(axes[:, 0], quantities):
        subset = frame[frame["quantity"] == quantity]
        abscissa = _abscissa(subset)
        keys = ["lambda", "t_a"] + (["t"] if abscissa == "x" else list())
        for key, curve in subset.groupby(keys, dropna=False, sort=False):
            lam, t_a = key[:2]
            label = f"$\\lambda$={lam:g}" + ("" if np.isnan(t_a) else f", $t_a$={t_a:g}")
            if abscissa == "x":
                label += f", t={key[2]:g}"
            curve = curve.sort_values(abscissa)
            lines = ax.errorbar(curve[abscissa], curve["mc_estimate"], yerr=curve["std_error"], fmt="o",
                                markersize=3, fillstyle="none", label=label)
            color = lines[0].get_color()
            if curve["theory_exact"].notna().any():
                ax.plot(curve[abscissa], curve["theory_exact"], "-", color=color)
            if curve["theory_asymptotic"].notna().any():
                ax.plot(curve[abscissa], curve["theory_asymptotic"], "--", color=color)

        if abscissa == "t" and _use_log_axes(subset["t"].to_numpy(dtype=float)):
            ax.set_xscale("log")
            if _use_log_axes(subset["mc_estimate"].to_numpy(dtype=float)):
                ax.set_yscale("log")
        ax.set_xlabel(abscissa)
        ax.set_ylabel(quantity)
        ax.legend(fontsize="small")
        ax.grid(alpha=0.3)

    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
