"""Decision rules as interval partitions of the real line.

For a homoscedastic Gaussian mixture the prior-weighted log densities

    g_i(x) = ln eta_i + mu_i * x / sigma^2 - mu_i^2 / (2 sigma^2)

are lines whose slopes increase with the class mean, so the argmax
rule is determined by the upper envelope of K lines and every decision
region is an interval ordered by mean.  A ThresholdRule stores the
K - 1 boundaries; equal adjacent cuts encode an empty region, and
cuts of -inf / +inf push regions off the end of the line.

Rules built here: the Bayes decision rule (argmax of eta_i * pdf_i),
the equiprobable variant that ignores priors, and the cost-sensitive
variant that reweights priors by row sums of inverse costs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import ClassDistribution, GaussianMixtureModel

__all__ = [
    "ThresholdRule",
    "CostMatrix",
    "bdr",
    "edr",
    "cs_bdr",
    "japkowicz_costs",
    "classify",
]


@dataclass(frozen=True, slots=True)
class ThresholdRule:
    """Non-decreasing cuts t_1 <= ... <= t_{K-1}, possibly infinite.

    Class i (1-based) owns the half-open interval (t_{i-1}, t_i] with
    t_0 = -inf and t_K = +inf, so boundary points belong to the lower
    class and the regions partition the line.
    """

    cuts: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.cuts) < 1:
            raise ValueError("a rule needs at least one cut (two classes)")
        c = np.asarray(self.cuts, dtype=float)
        if np.any(np.isnan(c)):
            raise ValueError("cuts must not be NaN")
        # elementwise compare: diff would warn on equal infinite cuts
        if np.any(c[1:] < c[:-1]):
            raise ValueError("cuts must be non-decreasing")

    @property
    def k(self) -> int:
        return len(self.cuts) + 1


@dataclass(frozen=True, slots=True)
class CostMatrix:
    """b[i][j] = cost of classifying true class i as class j."""

    b: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        m = np.asarray(self.b, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2:
            raise ValueError("cost matrix must be square, K >= 2")
        off = m[~np.eye(m.shape[0], dtype=bool)]
        if np.any(off <= 0.0):
            raise ValueError("off-diagonal costs must be positive")
        if np.any(np.diag(m) < 0.0):
            raise ValueError("diagonal costs must be non-negative")

    @property
    def k(self) -> int:
        return len(self.b)


def _envelope_cuts(means: np.ndarray, sigma: float, prior: np.ndarray) -> tuple[float, ...]:
    """Cuts of argmax_i prior_i * N(means_i, sigma^2) over classes with prior > 0.

    Upper-envelope scan over lines in slope order.  The boundary
    between surviving classes i < j sits at

        x = (mu_i + mu_j) / 2 + sigma^2 * ln(prior_i / prior_j) / (mu_j - mu_i)
    """
    k = means.size
    keep = np.flatnonzero(prior > 0.0)
    if keep.size == 0:
        raise ValueError("at least one class must have positive prior")

    def boundary(i: int, j: int) -> float:
        num = math.log(prior[i]) - math.log(prior[j])
        return (means[i] + means[j]) / 2.0 + sigma * sigma * num / (means[j] - means[i])

    hull: list[int] = []
    brk: list[float] = []
    for idx in keep:
        while hull:
            x = boundary(hull[-1], idx)
            if brk and x <= brk[-1]:
                hull.pop()
                brk.pop()
            else:
                hull.append(int(idx))
                brk.append(x)
                break
        else:
            hull.append(int(idx))

    cuts = np.empty(k - 1)
    for j in range(1, k):
        # number of surviving classes with 1-based label <= j
        t = int(np.searchsorted(np.asarray(hull), j))
        if t == 0:
            cuts[j - 1] = -math.inf
        elif t == len(hull):
            cuts[j - 1] = math.inf
        else:
            cuts[j - 1] = brk[t - 1]
    return tuple(float(c) for c in cuts)


def bdr(model: GaussianMixtureModel) -> ThresholdRule:
    """Bayes decision rule: argmax_i eta_i * pdf_i(x).

    Classes with eta_i = 0 never win the argmax and get empty regions.
    """
    return ThresholdRule(
        _envelope_cuts(
            np.asarray(model.means), model.sigma, np.asarray(model.eta.eta)
        )
    )


def edr(model: GaussianMixtureModel) -> ThresholdRule:
    """Equiprobable Bayes decision rule: the BDR with uniform priors.

    Ignores eta entirely; for adjacent means the cuts are midpoints.
    """
    return ThresholdRule(
        _envelope_cuts(
            np.asarray(model.means), model.sigma, np.full(model.k, 1.0 / model.k)
        )
    )


def japkowicz_costs(eta: ClassDistribution) -> CostMatrix:
    """Cost matrix b[i][j] = eta_i / eta_j built from the imbalance ratios."""
    e = np.asarray(eta.eta, dtype=float)
    if np.any(e == 0.0):
        raise ValueError("imbalance-ratio costs need strictly positive eta")
    m = e[:, None] / e[None, :]
    return CostMatrix(tuple(tuple(float(v) for v in row) for row in m))


def cs_bdr(model: GaussianMixtureModel, costs: CostMatrix) -> ThresholdRule:
    """Cost-sensitive BDR: argmax_i W_i * eta_i * pdf_i(x), W_i = sum_j 1/b[i][j].

    With the imbalance-ratio costs of japkowicz_costs, W_i * eta_i = 1
    for every class, so the rule collapses to the equiprobable one.
    """
    if costs.k != model.k:
        raise ValueError("cost matrix size must match the model")
    b = np.asarray(costs.b, dtype=float)
    if np.any(b <= 0.0):
        raise ValueError("cost-sensitive reweighting needs strictly positive costs")
    w = (1.0 / b).sum(axis=1)
    prior = w * np.asarray(model.eta.eta)
    total = prior.sum()
    if total <= 0.0:
        raise ValueError("reweighted priors vanish; no class can win")
    return ThresholdRule(
        _envelope_cuts(np.asarray(model.means), model.sigma, prior / total)
    )


def classify(rule: ThresholdRule, x) -> np.ndarray | int:
    """1-based class labels for scalar or array x under the half-open convention."""
    c = np.asarray(rule.cuts, dtype=float)
    idx = np.searchsorted(c, np.asarray(x, dtype=float), side="left") + 1
    if np.isscalar(x) or np.ndim(x) == 0:
        return int(idx)
    return idx
