"""Weighted Holder (power) means with extended-real exponents.

The mean of positive values a_1..a_K with weights z_1..z_K summing to 1 is

    M_p(a, z) = (sum_i z_i * a_i**p) ** (1/p)

for finite nonzero p, with the usual limit conventions: the weighted
geometric mean at p = 0, and the max / min of the values carrying
positive weight at p = +inf / -inf.  M_p is non-decreasing in p and
strict unless all weighted values are equal.

Zeros among the values are allowed: they contribute nothing for p > 0
and annihilate the mean (result 0) for p <= 0, matching the limit of
M_p as a value tends to 0 and the behaviour expected of recall vectors
with an empty decision region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["HolderSpec", "holder_mean", "pythagorean_check"]

_WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True, slots=True)
class HolderSpec:
    """Exponent p (may be +-inf) and a normalized non-negative weight vector."""

    p: float
    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.weights) < 1:
            raise ValueError("weights must be non-empty")
        if math.isnan(self.p):
            raise ValueError("exponent p must not be NaN")
        w = np.asarray(self.weights, dtype=float)
        if np.any(w < 0.0):
            raise ValueError("weights must be non-negative")
        if abs(float(w.sum()) - 1.0) > _WEIGHT_SUM_TOL:
            raise ValueError(f"weights must sum to 1 within {_WEIGHT_SUM_TOL}")

    @staticmethod
    def uniform(k: int, p: float) -> "HolderSpec":
        if k < 1:
            raise ValueError("k must be >= 1")
        return HolderSpec(p=p, weights=tuple([1.0 / k] * k))


def holder_mean(values, spec: HolderSpec) -> float:
    """Weighted power mean of `values` under `spec`.

    Raises ValueError on length mismatch or negative values.  Values of
    exactly 0 follow the limit convention described in the module
    docstring.
    """
    a = np.asarray(values, dtype=float)
    w = np.asarray(spec.weights, dtype=float)
    if a.shape != w.shape:
        raise ValueError(f"values length {a.shape} != weights length {w.shape}")
    if np.any(a < 0.0):
        raise ValueError("values must be non-negative")
    p = spec.p

    active = w > 0.0
    if not np.any(active):
        raise ValueError("at least one weight must be positive")
    aw = a[active]
    ww = w[active]

    if p == math.inf:
        return float(aw.max())
    if p == -math.inf:
        return float(aw.min())

    has_zero = bool(np.any(aw == 0.0))
    if has_zero:
        if p <= 0.0:
            return 0.0
        # zero values contribute zero mass for p > 0
        keep = aw > 0.0
        aw = aw[keep]
        ww = ww[keep]
        if aw.size == 0:
            return 0.0

    if p == 0.0:
        return float(np.exp(np.dot(ww, np.log(aw))))

    # Factor out the extreme value so every power argument is <= 1 (p > 0)
    # or >= 1 (p < 0); expm1/log1p keep full precision for tiny |p|.
    m = float(aw.max()) if p > 0.0 else float(aw.min())
    with np.errstate(over="ignore"):
        # a subnormal m can push a/m to inf; expm1(p*log(inf)) = -1 for
        # p < 0 is the exact limit, so the saturation is harmless
        t = np.dot(ww, np.expm1(p * np.log(aw / m)))
    if has_zero:
        # dropped zero terms shift the weighted sum of (a/m)^p - 1 by -w_zero
        t -= 1.0 - float(ww.sum())
    return m * math.exp(math.log1p(t) / p)


def pythagorean_check(values, weights) -> tuple[float, float, float]:
    """(arithmetic, geometric, harmonic) means for the given weights."""
    ws = tuple(float(x) for x in weights)
    return (
        holder_mean(values, HolderSpec(p=1.0, weights=ws)),
        holder_mean(values, HolderSpec(p=0.0, weights=ws)),
        holder_mean(values, HolderSpec(p=-1.0, weights=ws)),
    )
