"""Influence of the class distribution on a score, integrated over overlap.

For the delta family (means spaced delta apart, sigma 1) the influence
of a class distribution on a score S is

    I(eta) = integral over delta in [0.01, 10] of
             S(BDR on balanced model) - S(BDR on eta model)

so positive values mean the score rewards the balanced problem.  The
binary case sweeps eta_1; the multi-class case sweeps the epsilon
knob of the one-parameter imbalance family.

The quadrature engine is an adaptive Simpson rule with Richardson
extrapolation.  The integrands are smooth except for isolated kinks
where a class enters or leaves the Bayes envelope; subdivision handles
those without special casing, and a generous depth limit keeps the
engine robust near them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .gaussian import log_norm_cdf
from .metrics import SCORE_KINDS, scores, true_confusion
from .model import ClassDistribution, GaussianMixtureModel, delta_family, epsilon_distribution
from .rules import ThresholdRule, bdr

__all__ = [
    "QuadratureError",
    "InfluenceCurve",
    "integrate_adaptive",
    "influence_binary",
    "influence_multiclass",
    "sweep",
    "INTEGRATION_DOMAIN",
]

INTEGRATION_DOMAIN = (0.01, 10.0)
_MAX_DEPTH = 60


class QuadratureError(Exception):
    """Subdivision hit the depth limit; carries the best estimate found."""

    def __init__(self, estimate: float, error_bound: float):
        super().__init__(
            f"quadrature did not converge at depth {_MAX_DEPTH}: "
            f"estimate {estimate!r}, error bound {error_bound!r}"
        )
        self.estimate = estimate
        self.error_bound = error_bound


def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
    return h / 6.0 * (fa + 4.0 * fm + fb)


def _adapt(
    f: Callable[[float], float],
    a: float,
    b: float,
    fa: float,
    fm: float,
    fb: float,
    whole: float,
    tol: float,
    depth: int,
    gave_up: list,
) -> tuple[float, float]:
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = _simpson(fa, flm, fm, m - a)
    right = _simpson(fm, frm, fb, b - m)
    err = (left + right - whole) / 15.0
    if abs(err) <= tol:
        return left + right + err, abs(err)
    if depth >= _MAX_DEPTH:
        # keep the local best estimate and finish the sweep so the
        # caller can report a global value alongside the failure
        gave_up.append((a, b))
        return left + right + err, abs(err)
    vl, el = _adapt(f, a, m, fa, flm, fm, left, tol / 2.0, depth + 1, gave_up)
    vr, er = _adapt(f, m, b, fm, frm, fb, right, tol / 2.0, depth + 1, gave_up)
    return vl + vr, el + er


def integrate_adaptive(
    f: Callable[[float], float], a: float, b: float, tol: float
) -> tuple[float, float]:
    """Adaptive Simpson estimate of the integral of f over [a, b].

    Returns (estimate, error_bound) with error_bound <= tol on success.
    Deterministic for a fixed f.  Raises QuadratureError (carrying the
    best estimate) if the recursion depth limit is exhausted.
    """
    if not a < b:
        raise ValueError("need a < b")
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    for v in (fa, fm, fb):
        if not math.isfinite(v):
            raise ValueError("integrand must be finite on [a, b]")
    whole = _simpson(fa, fm, fb, b - a)
    gave_up: list = []
    value, bound = _adapt(f, a, b, fa, fm, fb, whole, tol, 0, gave_up)
    if gave_up:
        raise QuadratureError(value, bound)
    return value, bound


def _log_ndtr_diff(a: float, b: float) -> float:
    """log(Phi(b) - Phi(a)) for a <= b, stable in the far tails."""
    if a == b:
        return -math.inf
    if a + b > 0.0:
        # reflect so the difference is taken between left-tail values,
        # where log_ndtr keeps precision that ndtr loses to underflow
        a, b = -b, -a
    la = float(log_norm_cdf(a))
    lb = float(log_norm_cdf(b))
    t = -math.expm1(la - lb)
    if t <= 0.0:
        return -math.inf
    return lb + math.log(t)


def _precision_log_space(model: GaussianMixtureModel, rule: ThresholdRule, i: int) -> float:
    """precision_i of `rule` on `model` computed from log tail masses.

    The confusion-matrix path underflows once a cut drifts past the
    point where ndtr rounds to zero, which turns the precision ratio
    into a staircase and finally into the empty-column convention.
    Working with log masses keeps the ratio exact arbitrarily far out.
    Conventions match metrics: a column with no mass scores 1.0.
    """
    mu = model.means
    eta = model.eta.eta
    edges = (-math.inf,) + rule.cuts + (math.inf,)
    lo, hi = edges[i - 1], edges[i]
    log_terms = []
    num = -math.inf
    for j in range(model.k):
        if eta[j] == 0.0:
            continue
        lm = _log_ndtr_diff((lo - mu[j]) / model.sigma, (hi - mu[j]) / model.sigma)
        if lm == -math.inf:
            continue
        term = math.log(eta[j]) + lm
        log_terms.append(term)
        if j == i - 1:
            num = term
    if not log_terms:
        return 1.0
    if num == -math.inf:
        return 0.0
    top = max(log_terms)
    den = top + math.log(math.fsum(math.exp(t - top) for t in log_terms))
    return math.exp(num - den)


def _bdr_score(k: int, delta: float, eta: ClassDistribution, kind: str) -> float:
    m = delta_family(k, delta, eta)
    side, _, idx = kind.partition("_")
    if side == "precision":
        return _precision_log_space(m, bdr(m), int(idx))
    return scores(true_confusion(m, bdr(m))).value(kind)


def _score_gap(k: int, balanced: ClassDistribution, eta: ClassDistribution, kind: str):
    def gap(delta: float) -> float:
        return _bdr_score(k, delta, balanced, kind) - _bdr_score(k, delta, eta, kind)

    return gap


def _check_kind(kind: str) -> None:
    if kind not in SCORE_KINDS:
        raise ValueError(f"unknown score kind {kind!r}; expected one of {SCORE_KINDS}")


def influence_binary(score_kind: str, eta_1: float, tol: float = 1e-6) -> float:
    """Influence of the binary distribution (eta_1, 1 - eta_1)."""
    _check_kind(score_kind)
    if not 0.0 <= eta_1 <= 1.0:
        raise ValueError("eta_1 must lie in [0, 1]")
    balanced = ClassDistribution.uniform(2)
    eta = ClassDistribution((eta_1, 1.0 - eta_1))
    a, b = INTEGRATION_DOMAIN
    value, _ = integrate_adaptive(_score_gap(2, balanced, eta, score_kind), a, b, tol)
    return value


def influence_multiclass(score_kind: str, k: int, epsilon: float, tol: float = 1e-6) -> float:
    """Influence of epsilon_distribution(k, epsilon) relative to balance."""
    _check_kind(score_kind)
    balanced = ClassDistribution.uniform(k)
    eta = epsilon_distribution(k, epsilon)
    a, b = INTEGRATION_DOMAIN
    value, _ = integrate_adaptive(_score_gap(k, balanced, eta, score_kind), a, b, tol)
    return value


@dataclass(frozen=True, slots=True)
class InfluenceCurve:
    """Influence values for one score over a parameter grid.

    parameter_kind is 'eta' for binary sweeps (the grid holds eta_1
    values) and 'epsilon' for multi-class sweeps.  quad_errors holds
    the per-node error bounds; a node whose bound exceeds
    quadrature_tol did not converge and kept its best estimate.
    """

    score_kind: str
    k: int
    parameter_kind: str
    grid: tuple[tuple[float, float], ...]
    quad_errors: tuple[float, ...]
    quadrature_tol: float

    def __post_init__(self) -> None:
        if self.parameter_kind not in ("eta", "epsilon"):
            raise ValueError("parameter_kind must be 'eta' or 'epsilon'")
        if self.quadrature_tol <= 0.0:
            raise ValueError("quadrature_tol must be positive")
        if len(self.quad_errors) != len(self.grid):
            raise ValueError("one error bound per grid node required")
        params = [p for p, _ in self.grid]
        if any(b <= a for a, b in zip(params, params[1:])):
            raise ValueError("grid parameters must be strictly increasing")
        if self.parameter_kind == "eta":
            lo, hi = 0.0, 1.0
        else:
            lo, hi = -1.0 / self.k, (self.k - 1.0) / self.k
        if params and (params[0] < lo - 1e-12 or params[-1] > hi + 1e-12):
            raise ValueError("grid parameters leave the legal range")
        balanced = 0.5 if self.parameter_kind == "eta" else 0.0
        for p, v in self.grid:
            if p == balanced and abs(v) > self.quadrature_tol:
                raise ValueError("influence at the balanced point must vanish")

    @property
    def parameters(self) -> tuple[float, ...]:
        return tuple(p for p, _ in self.grid)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(v for _, v in self.grid)


def default_grid(k: int) -> np.ndarray:
    """eta_1 in {0.01, ..., 0.99} for binary; 101 epsilon nodes otherwise.

    Multi-class endpoints are pulled in by 1e-6 so no class probability
    is exactly zero at the ends of the sweep.
    """
    if k == 2:
        return np.round(np.arange(0.01, 0.991, 0.01), 10)
    return np.linspace(-1.0 / k + 1e-6, (k - 1.0) / k - 1e-6, 101)


def sweep(
    score_kinds: list[str] | tuple[str, ...],
    k: int,
    grid=None,
    tol: float = 1e-6,
) -> list[InfluenceCurve]:
    """Influence curves for each score over the grid, in input order.

    Nodes where the quadrature hits its depth limit are kept at their
    best estimate with the unconverged bound recorded, so one bad node
    cannot abort a whole sweep.
    """
    for kind in score_kinds:
        _check_kind(kind)
    if k < 2:
        raise ValueError("k must be >= 2")
    nodes = default_grid(k) if grid is None else np.asarray(grid, dtype=float)
    if nodes.size == 0:
        raise ValueError("empty parameter grid")
    a, b = INTEGRATION_DOMAIN
    balanced = ClassDistribution.uniform(k)
    curves = []
    for kind in score_kinds:
        pts = []
        errs = []
        for p in nodes:
            if k == 2:
                eta = ClassDistribution((float(p), 1.0 - float(p)))
            else:
                eta = epsilon_distribution(k, float(p))
            f = _score_gap(k, balanced, eta, kind)
            try:
                v, e = integrate_adaptive(f, a, b, tol)
            except QuadratureError as exc:
                v, e = exc.estimate, exc.error_bound
            pts.append((float(p), v))
            errs.append(e)
        curves.append(
            InfluenceCurve(
                score_kind=kind,
                k=k,
                parameter_kind="eta" if k == 2 else "epsilon",
                grid=tuple(pts),
                quad_errors=tuple(errs),
                quadrature_tol=tol,
            )
        )
    return curves
