"""Score-optimal threshold rules by exhaustive grid search plus refinement.

The search space is the set of ordered cut vectors inside a box
extending six sigmas beyond the extreme means, with -inf/+inf admitted
as degenerate cuts so rules that silence a class entirely (empty
decision region) are reachable.  A coarse grid pass picks the best
candidate, the envelope rules are always admitted as extra candidates
even if imbalance pushes their cuts outside the box, and per-coordinate
golden-section refinement polishes the winner.  Grid ties break toward
the lexicographically smallest cut vector, so results are deterministic.

Only K in {2, 3} is supported; the candidate enumeration extends to
higher K but is not implemented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .gaussian import norm_cdf, norm_ppf
from .metrics import GLOBAL_SCORES, scores, true_confusion
from .model import GaussianMixtureModel, delta_family, epsilon_distribution
from .rules import ThresholdRule, bdr, edr

__all__ = [
    "SearchResult",
    "OptimalityCheck",
    "WitnessReport",
    "UnsupportedDimensionError",
    "optimize_rule",
    "edr_optimality_check",
    "edr_nonoptimality_witness",
    "equal_recall_cuts",
]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0


class UnsupportedDimensionError(ValueError):
    """Raised when a search is requested for more classes than implemented."""


@dataclass(frozen=True, slots=True)
class SearchResult:
    rule: ThresholdRule
    score_kind: str
    score_value: float
    evaluations: int
    grid_step: float

    def __post_init__(self) -> None:
        if not -1e-9 <= self.score_value <= 1.0 + 1e-9:
            raise ValueError("score value must lie in [0, 1]")
        if self.evaluations < 1:
            raise ValueError("evaluations must be positive")
        if not self.grid_step > 0.0:
            raise ValueError("grid step must be positive")


@dataclass(frozen=True, slots=True)
class OptimalityCheck:
    holds: bool
    margin: float
    edr_value: float
    result: SearchResult


@dataclass(frozen=True, slots=True)
class WitnessReport:
    found: bool
    score_kind: str | None
    model: GaussianMixtureModel | None
    rule: ThresholdRule | None
    improvement: float
    nodes_scanned: int


def _kind_index(kind: str, k: int) -> tuple[str, int] | None:
    side, _, num = kind.partition("_")
    if side in ("recall", "precision") and num.isdigit():
        i = int(num)
        if 1 <= i <= k:
            return side, i - 1
    return None


def _validate_kind(kind: str, k: int) -> None:
    if kind not in GLOBAL_SCORES and _kind_index(kind, k) is None:
        raise ValueError(f"unknown score kind: {kind!r}")


def _batch_scores(kind: str, eta: np.ndarray, rm: np.ndarray) -> np.ndarray:
    """Scores for a candidate batch from region masses rm[class, region, cand]."""
    k = rm.shape[0]
    raw = rm[np.arange(k), np.arange(k), :]
    # empty-prior classes score recall 1 by the 0/0 convention
    recalls = np.where((eta > 0.0)[:, None], raw, 1.0)
    if kind == "acc":
        return eta @ raw
    if kind == "a_mean":
        return recalls.mean(axis=0)
    if kind == "g_mean":
        return np.prod(recalls, axis=0) ** (1.0 / k)
    if kind == "h_mean":
        pos = np.all(recalls > 0.0, axis=0)
        inv = 1.0 / np.where(recalls > 0.0, recalls, 1.0)
        return np.where(pos, k / inv.sum(axis=0), 0.0)
    if kind == "max_r":
        return recalls.max(axis=0)
    if kind == "min_r":
        return recalls.min(axis=0)
    side, idx = _kind_index(kind, k)  # validated upfront
    if side == "recall":
        return recalls[idx]
    col = eta @ rm[:, idx, :]
    num = eta[idx] * raw[idx]
    return np.where(col > 0.0, num / np.where(col > 0.0, col, 1.0), 1.0)


def _cuts_score(model: GaussianMixtureModel, kind: str, cuts) -> float:
    rule = ThresholdRule(cuts=tuple(float(c) for c in cuts))
    return scores(true_confusion(model, rule)).value(kind)


def _golden_max(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Maximize f on [lo, hi] to bracket width tol; ties shrink leftward."""
    a, b = lo, hi
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    fc, fd = f(c), f(d)
    while h > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + _INVPHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INVPHI * h
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def optimize_rule(
    model: GaussianMixtureModel,
    score_kind: str,
    grid_step: float | None = None,
    refine_tol: float | None = None,
) -> SearchResult:
    """Best threshold rule for one score, by grid search plus refinement."""
    k = model.k
    if k > 3:
        raise UnsupportedDimensionError(
            f"search over cut vectors is implemented for K in {{2, 3}}, got K={k}"
        )
    _validate_kind(score_kind, k)
    s = model.sigma
    step = 0.01 * s if grid_step is None else float(grid_step)
    tol = 1e-6 * s if refine_tol is None else float(refine_tol)
    if step <= 0.0 or tol <= 0.0:
        raise ValueError("grid_step and refine_tol must be positive")

    mu = np.asarray(model.means)
    eta = np.asarray(model.eta.eta)
    box_lo = float(mu[0] - 6.0 * s)
    box_hi = float(mu[-1] + 6.0 * s)
    n_steps = int(math.floor((box_hi - box_lo) / step + 1e-9))
    ext = np.concatenate(([-np.inf], box_lo + step * np.arange(n_steps + 1), [np.inf]))
    n = ext.size
    T = norm_cdf((ext[None, :] - mu[:, None]) / s)

    evals = 0
    if k == 2:
        rm = np.empty((2, 2, n))
        rm[:, 0, :] = T
        rm[:, 1, :] = 1.0 - T
        vals = _batch_scores(score_kind, eta, rm)
        evals += n
        j = int(np.argmax(vals))
        best_cuts = [float(ext[j])]
    else:
        best_fast = -np.inf
        best_ij = (0, 0)
        rm = np.empty((3, 3, n))
        for i in range(n):
            m = n - i
            rm[:, 0, :m] = T[:, i][:, None]
            rm[:, 1, :m] = np.maximum(T[:, i:] - T[:, i][:, None], 0.0)
            rm[:, 2, :m] = 1.0 - T[:, i:]
            vals = _batch_scores(score_kind, eta, rm[:, :, :m])
            evals += m
            j = int(np.argmax(vals))
            if vals[j] > best_fast:
                best_fast = float(vals[j])
                best_ij = (i, i + j)
        best_cuts = [float(ext[best_ij[0]]), float(ext[best_ij[1]])]

    best = _cuts_score(model, score_kind, best_cuts)
    evals += 1
    for seed in (bdr(model), edr(model)):
        sc = _cuts_score(model, score_kind, seed.cuts)
        evals += 1
        if sc > best:
            best = sc
            best_cuts = list(seed.cuts)

    def coord_f(x: float, idx: int) -> float:
        nonlocal evals
        trial = list(best_cuts)
        trial[idx] = x
        evals += 1
        return _cuts_score(model, score_kind, trial)

    improved = True
    passes = 0
    while improved and passes < 60:
        improved = False
        passes += 1
        for idx in range(k - 1):
            if not math.isfinite(best_cuts[idx]):
                continue
            lo_b = box_lo if idx == 0 else max(box_lo, best_cuts[idx - 1])
            hi_b = box_hi if idx == k - 2 else min(box_hi, best_cuts[idx + 1])
            if not lo_b < hi_b:
                continue
            x, fx = _golden_max(lambda t: coord_f(t, idx), lo_b, hi_b, tol)
            if fx > best:
                best = fx
                best_cuts[idx] = x
                improved = True

    rule = ThresholdRule(cuts=tuple(best_cuts))
    score_value = scores(true_confusion(model, rule)).value(score_kind)
    if abs(score_value - best) > 1e-12:
        raise AssertionError("search bookkeeping diverged from the scoring path")
    return SearchResult(
        rule=rule,
        score_kind=score_kind,
        score_value=score_value,
        evaluations=evals,
        grid_step=step,
    )


def edr_optimality_check(
    model: GaussianMixtureModel,
    grid_step: float | None = None,
    refine_tol: float | None = None,
    tol: float = 1e-6,
) -> OptimalityCheck:
    """Does any threshold rule beat the equal-priors rule on the a-mean?

    The margin is best-found minus the equal-priors rule's a-mean; the
    check holds when the margin does not exceed `tol`.
    """
    result = optimize_rule(model, "a_mean", grid_step, refine_tol)
    edr_value = scores(true_confusion(model, edr(model))).value("a_mean")
    margin = result.score_value - edr_value
    return OptimalityCheck(
        holds=margin <= tol, margin=margin, edr_value=edr_value, result=result
    )


def edr_nonoptimality_witness(
    k: int = 3,
    score_kinds: tuple[str, ...] = ("g_mean", "h_mean", "min_r"),
    threshold: float = 1e-4,
    deltas: tuple[float, ...] | None = None,
    epsilons: tuple[float, ...] | None = None,
    grid_step: float | None = None,
    refine_tol: float | None = None,
) -> WitnessReport:
    """Hunt the evenly spaced family for a rule beating the equal-priors rule.

    Scans small negative imbalance offsets (one class slightly under
    1/k, the rest slightly over) across a few mean spacings.  Returns
    the first (model, score) pair where the optimized rule improves on
    the equal-priors rule by more than `threshold`; when the default
    scan is empty the grid widens once before reporting no witness.
    """
    base_deltas = deltas if deltas is not None else (0.5, 1.0, 2.0)
    base_eps = epsilons if epsilons is not None else (-0.02, -0.05, -0.08)
    wider_deltas = base_deltas + (0.25, 3.0)
    wider_eps = base_eps + (-0.01, -0.12)
    scanned = 0
    for dd, ee in ((base_deltas, base_eps), (wider_deltas, wider_eps)):
        for delta in dd:
            for eps in ee:
                model = delta_family(k, delta, epsilon_distribution(k, eps))
                edr_report = scores(true_confusion(model, edr(model)))
                for kind in score_kinds:
                    scanned += 1
                    result = optimize_rule(model, kind, grid_step, refine_tol)
                    gain = result.score_value - edr_report.value(kind)
                    if gain > threshold:
                        return WitnessReport(
                            found=True,
                            score_kind=kind,
                            model=model,
                            rule=result.rule,
                            improvement=gain,
                            nodes_scanned=scanned,
                        )
        if deltas is not None or epsilons is not None:
            break  # caller fixed the scan; do not widen
    return WitnessReport(
        found=False,
        score_kind=None,
        model=None,
        rule=None,
        improvement=0.0,
        nodes_scanned=scanned,
    )


def equal_recall_cuts(model: GaussianMixtureModel, xtol: float = 1e-14) -> ThresholdRule:
    """Cuts making every class recall equal, by root-finding on the recall.

    Independent of the grid search: for K=3 the outer cuts are written
    in terms of the common recall r, and the middle-class recall match
    is solved for r by bracketing.  Used to cross-check the min-recall
    optimum, which balances all recalls at a maximum.
    """
    if model.k == 2:
        return ThresholdRule(cuts=(0.5 * (model.means[0] + model.means[1]),))
    if model.k != 3:
        raise UnsupportedDimensionError(
            f"equal-recall construction is implemented for K in {{2, 3}}, got K={model.k}"
        )
    mu1, mu2, mu3 = model.means
    s = model.sigma

    def middle_gap(r: float) -> float:
        t1 = mu1 + s * norm_ppf(r)
        t2 = mu3 + s * norm_ppf(1.0 - r)
        return float(norm_cdf((t2 - mu2) / s) - norm_cdf((t1 - mu2) / s)) - r

    r = brentq(middle_gap, 1e-12, 1.0 - 1e-12, xtol=xtol)
    t1 = mu1 + s * norm_ppf(r)
    t2 = mu3 + s * norm_ppf(1.0 - r)
    return ThresholdRule(cuts=(float(t1), float(t2)))
