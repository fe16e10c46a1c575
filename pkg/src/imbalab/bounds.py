"""Competitiveness bounds for unweighted Holder means of recalls.

A uniformly random K-class classifier scores exactly 1/K on every
recall-based Holder mean, so 1/K is the floor below which some recall
is certainly worse than random.  The matching ceiling is the value of
the mean in the extreme configuration with one recall at 1/K and the
rest at 1: any score at or above it certifies that every recall beats
1/K.  Between the two bounds the single number cannot decide.

A closed form sometimes quoted for the ceiling, (K^p + K^(p-1) + 1)^(1/p),
exceeds 1 already at K = 2, p = 1 and so cannot be a mean of recalls;
the bound here is computed directly from the extreme configuration,
and the brute-force soundness tests confirm that reading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .holder import HolderSpec, holder_mean

__all__ = ["CompetitivenessVerdict", "s_sup", "s_inf", "verdict"]

_BOUND_TOL = 1e-12


def s_sup(k: int, p: float) -> float:
    """Lowest score certifying all recalls exceed 1/k: M_p(1/k, 1, ..., 1)."""
    if k < 2:
        raise ValueError("k must be >= 2")
    values = (1.0 / k,) + (1.0,) * (k - 1)
    return holder_mean(values, HolderSpec.uniform(k, p))


def s_inf(k: int) -> float:
    """Highest score below which some recall is certainly under 1/k."""
    if k < 2:
        raise ValueError("k must be >= 2")
    return 1.0 / k


@dataclass(frozen=True, slots=True)
class CompetitivenessVerdict:
    band: str
    s_sup: float
    s_inf: float
    p: float
    k: int

    def __post_init__(self) -> None:
        if self.band not in ("SUPERIOR", "INDETERMINATE", "INFERIOR"):
            raise ValueError("unknown band")
        if abs(self.s_inf - 1.0 / self.k) > _BOUND_TOL:
            raise ValueError("s_inf must equal 1/k")
        if not (self.s_inf - _BOUND_TOL <= self.s_sup <= 1.0 + _BOUND_TOL):
            raise ValueError("s_sup must lie in [1/k, 1]")


def verdict(score_value: float, k: int, p: float) -> CompetitivenessVerdict:
    """Three-band classification of a reported Holder-mean score."""
    if math.isnan(score_value) or not 0.0 <= score_value <= 1.0:
        raise ValueError("score value must lie in [0, 1]")
    hi = s_sup(k, p)
    lo = s_inf(k)
    if score_value >= hi:
        band = "SUPERIOR"
    elif score_value < lo:
        band = "INFERIOR"
    else:
        band = "INDETERMINATE"
    return CompetitivenessVerdict(band=band, s_sup=hi, s_inf=lo, p=p, k=k)
