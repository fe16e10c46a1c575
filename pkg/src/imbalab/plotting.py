"""Figure rendering for the report paths of the command-line tool.

Uses the non-interactive Agg backend so figures render in headless
environments.  Each function writes one file and returns nothing; the
CSV written next to it stays the primary output.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .influence import InfluenceCurve  # noqa: E402
from .model import GaussianMixtureModel  # noqa: E402
from .search import SearchResult  # noqa: E402

__all__ = ["plot_influence", "plot_bounds", "plot_search"]


def plot_influence(curves: list[InfluenceCurve], path: str) -> None:
    """Influence vs. imbalance parameter, one line per score."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for curve in curves:
        ax.plot(curve.parameters, curve.values, label=curve.score_kind, linewidth=1.4)
    ax.axhline(0.0, color="black", linewidth=0.8)
    k = curves[0].k if curves else 2
    xlabel = "eta_1" if curves and curves[0].parameter_kind == "eta" else "epsilon"
    ax.set_xlabel(xlabel)
    ax.set_ylabel("influence")
    ax.set_title(f"Influence of class imbalance (K={k})")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_bounds(
    p_values: np.ndarray, s_inf_values: np.ndarray, s_sup_values: np.ndarray, k: int, path: str
) -> None:
    """Competitiveness bands over the Holder exponent."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    finite = np.isfinite(np.asarray(p_values, dtype=float))
    p = np.asarray(p_values, dtype=float)[finite]
    hi = np.asarray(s_sup_values)[finite]
    lo = np.asarray(s_inf_values)[finite]
    ax.plot(p, hi, label="s_sup", color="tab:red", linewidth=1.4)
    ax.plot(p, lo, label="s_inf = 1/K", color="tab:blue", linewidth=1.4)
    ax.fill_between(p, lo, hi, color="tab:orange", alpha=0.2, label="indeterminate")
    ax.set_xlabel("p")
    ax.set_ylabel("score bound")
    ax.set_title(f"Competitiveness bounds (K={k})")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_search(model: GaussianMixtureModel, result: SearchResult, path: str) -> None:
    """Weighted class densities with the optimized cuts as vertical lines."""
    lo = model.means[0] - 4.0 * model.sigma
    hi = model.means[-1] + 4.0 * model.sigma
    xs = np.linspace(lo, hi, 801)
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for i in range(1, model.k + 1):
        ax.plot(
            xs,
            model.eta.eta[i - 1] * model.class_pdf(i, xs),
            label=f"eta_{i} f_{i}",
            linewidth=1.4,
        )
    for c in result.rule.cuts:
        if math.isfinite(c):
            ax.axvline(c, color="black", linestyle="--", linewidth=1.0)
    ax.set_xlabel("x")
    ax.set_ylabel("weighted density")
    ax.set_title(
        f"{result.score_kind}-optimal rule, score={result.score_value:.6f}"
    )
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
