"""True confusion matrices and the recall-based performance scores.

The true confusion matrix of a rule on a model has entries

    a[i][j] = eta_i * P(X_i in region j),  X_i ~ N(mu_i, sigma^2),

so row i sums to eta_i and the whole matrix sums to 1.  All scores
derive from it: per-class recall and precision, accuracy, and the
unweighted Holder means of the recalls at p = 1, 0, -1 together with
the two extremes.  Whenever a denominator vanishes (an empty row or
column), the affected ratio is 1 by convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gaussian import norm_cdf
from .holder import HolderSpec, holder_mean
from .model import ClassDistribution, GaussianMixtureModel
from .rules import ThresholdRule, bdr

__all__ = [
    "ConfusionMatrix",
    "ScoreReport",
    "true_confusion",
    "scores",
    "rand_confusion",
    "bayes_error",
    "GLOBAL_SCORES",
    "LOCAL_SCORES",
    "SCORE_KINDS",
]

GLOBAL_SCORES = ("acc", "a_mean", "g_mean", "h_mean", "max_r", "min_r")
LOCAL_SCORES = ("recall_1", "precision_1")
SCORE_KINDS = GLOBAL_SCORES + LOCAL_SCORES

_MASS_TOL = 1e-10
_CHAIN_TOL = 1e-9


@dataclass(frozen=True)
class ConfusionMatrix:
    """K x K matrix of joint masses, analytic or empirical."""

    a: np.ndarray
    provenance: str

    def __post_init__(self) -> None:
        m = np.array(self.a, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2:
            raise ValueError("confusion matrix must be square, K >= 2")
        if np.any(m < 0.0):
            raise ValueError("confusion entries must be non-negative")
        if abs(float(m.sum()) - 1.0) > _MASS_TOL:
            raise ValueError(f"confusion mass must total 1 within {_MASS_TOL}")
        if self.provenance not in ("analytic", "empirical"):
            raise ValueError("provenance must be 'analytic' or 'empirical'")
        m.setflags(write=False)
        object.__setattr__(self, "a", m)

    @property
    def k(self) -> int:
        return self.a.shape[0]


@dataclass(frozen=True, slots=True)
class ScoreReport:
    recalls: tuple[float, ...]
    precisions: tuple[float, ...]
    acc: float
    a_mean: float
    g_mean: float
    h_mean: float
    max_r: float
    min_r: float

    def __post_init__(self) -> None:
        chain = (self.min_r, self.h_mean, self.g_mean, self.a_mean, self.max_r)
        for lo, hi in zip(chain, chain[1:]):
            if lo > hi + _CHAIN_TOL:
                raise ValueError("score report violates the power-mean ordering")
        if not (self.min_r - _CHAIN_TOL <= self.acc <= self.max_r + _CHAIN_TOL):
            raise ValueError("accuracy must lie between the extreme recalls")

    def value(self, kind: str) -> float:
        """Look up a score by name; recall_i/precision_i are 1-based."""
        if kind in GLOBAL_SCORES:
            return getattr(self, kind)
        side, _, num = kind.partition("_")
        if side in ("recall", "precision") and num.isdigit():
            i = int(num)
            vec = self.recalls if side == "recall" else self.precisions
            if 1 <= i <= len(vec):
                return vec[i - 1]
        raise KeyError(f"unknown score kind: {kind!r}")


def true_confusion(model: GaussianMixtureModel, rule: ThresholdRule) -> ConfusionMatrix:
    """Exact expectation matrix of `rule` on `model`."""
    if rule.k != model.k:
        raise ValueError("rule and model class counts differ")
    mu = np.asarray(model.means)
    edges = np.concatenate(([-math.inf], np.asarray(rule.cuts, dtype=float), [math.inf]))
    z = (edges[None, :] - mu[:, None]) / model.sigma
    # norm_cdf is not exactly monotone at 1-ulp argument spacing, so a
    # region squeezed between near-identical cuts can diff to -1e-16
    mass = np.maximum(np.diff(norm_cdf(z), axis=1), 0.0)
    a = np.asarray(model.eta.eta)[:, None] * mass
    return ConfusionMatrix(a=a, provenance="analytic")


def _ratio_or_one(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.ones_like(num)
    nz = den > 0.0
    out[nz] = num[nz] / den[nz]
    return out


def scores(cm: ConfusionMatrix) -> ScoreReport:
    a = cm.a
    diag = np.diag(a).astype(float)
    recalls = _ratio_or_one(diag, a.sum(axis=1))
    precisions = _ratio_or_one(diag, a.sum(axis=0))
    k = cm.k
    uniform = HolderSpec.uniform(k, 1.0).weights
    return ScoreReport(
        recalls=tuple(float(r) for r in recalls),
        precisions=tuple(float(p) for p in precisions),
        acc=float(diag.sum() / a.sum()),
        a_mean=holder_mean(recalls, HolderSpec(p=1.0, weights=uniform)),
        g_mean=holder_mean(recalls, HolderSpec(p=0.0, weights=uniform)),
        h_mean=holder_mean(recalls, HolderSpec(p=-1.0, weights=uniform)),
        max_r=float(recalls.max()),
        min_r=float(recalls.min()),
    )


def rand_confusion(eta: ClassDistribution) -> ConfusionMatrix:
    """Uniformly random classifier: a[i][j] = eta_i / K; every global score is 1/K."""
    e = np.asarray(eta.eta, dtype=float)
    a = np.repeat(e[:, None], e.size, axis=1) / e.size
    return ConfusionMatrix(a=a, provenance="analytic")


def bayes_error(model: GaussianMixtureModel) -> float:
    """Misclassification mass of the accuracy-optimal rule, 1 - trace."""
    cm = true_confusion(model, bdr(model))
    return float(1.0 - np.trace(cm.a))
