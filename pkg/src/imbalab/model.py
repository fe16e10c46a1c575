"""Generative model: K univariate Gaussian classes with a shared sigma.

A problem instance is a class distribution eta on {1..K} plus one
Gaussian N(mu_i, sigma^2) per class.  The shared sigma keeps every
pairwise discriminant linear, so all the decision rules studied here
are interval partitions of the real line.  Class labels are 1-based
and classes are kept sorted by mean.

The delta family is the constrained experimental model: means at
0, delta, 2*delta, ..., sigma = 1.  The epsilon parameterization is
the one-knob imbalance family: class 1 holds 1/K + eps, the remaining
classes share the complement equally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ClassDistribution",
    "GaussianMixtureModel",
    "delta_family",
    "epsilon_distribution",
    "imbalance_kind",
]

_SIMPLEX_TOL = 1e-12
_BALANCED_TOL = 1e-12


@dataclass(frozen=True, slots=True)
class ClassDistribution:
    """Probability vector over K >= 2 classes."""

    eta: tuple[float, ...]

    def __post_init__(self) -> None:
        e = np.asarray(self.eta, dtype=float)
        if e.size < 2:
            raise ValueError("need at least two classes")
        if np.any(e < 0.0) or np.any(e > 1.0):
            raise ValueError("class probabilities must lie in [0, 1]")
        if abs(float(e.sum()) - 1.0) > _SIMPLEX_TOL:
            raise ValueError(f"class probabilities must sum to 1 within {_SIMPLEX_TOL}")

    @property
    def k(self) -> int:
        return len(self.eta)

    @staticmethod
    def uniform(k: int) -> "ClassDistribution":
        return ClassDistribution(tuple([1.0 / k] * k))


@dataclass(frozen=True, slots=True)
class GaussianMixtureModel:
    """Class-conditional Gaussians N(means[i], sigma^2) with priors eta.

    Construction relabels classes so means are strictly increasing,
    permuting eta alongside.  Equal means are rejected: the mixture
    would not be identifiable and boundary formulas divide by mean
    differences.
    """

    means: tuple[float, ...]
    sigma: float
    eta: ClassDistribution

    def __post_init__(self) -> None:
        if self.sigma <= 0.0:
            raise ValueError("sigma must be positive")
        mu = np.asarray(self.means, dtype=float)
        if mu.size != self.eta.k:
            raise ValueError("means and eta must have the same length")
        if not np.all(np.isfinite(mu)):
            raise ValueError("means must be finite")
        order = np.argsort(mu, kind="stable")
        if np.any(np.diff(mu[order]) <= 0.0):
            raise ValueError("class means must be distinct")
        if np.any(order != np.arange(mu.size)):
            e = np.asarray(self.eta.eta)[order]
            object.__setattr__(self, "means", tuple(float(m) for m in mu[order]))
            object.__setattr__(self, "eta", ClassDistribution(tuple(float(x) for x in e)))

    @property
    def k(self) -> int:
        return len(self.means)

    def class_pdf(self, i: int, x):
        """Density of class i (1-based) at x."""
        mu = self.means[i - 1]
        z = (np.asarray(x, dtype=float) - mu) / self.sigma
        return np.exp(-0.5 * z * z) / (self.sigma * np.sqrt(2.0 * np.pi))


def delta_family(k: int, delta: float, eta: ClassDistribution) -> GaussianMixtureModel:
    """Means (i-1)*delta for i = 1..k, sigma = 1."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if delta <= 0.0:
        raise ValueError("delta must be positive")
    if eta.k != k:
        raise ValueError("eta length must equal k")
    return GaussianMixtureModel(
        means=tuple(float((i) * delta) for i in range(k)), sigma=1.0, eta=eta
    )


def epsilon_distribution(k: int, epsilon: float) -> ClassDistribution:
    """eta_1 = 1/k + eps, the other k-1 classes split the rest equally.

    eps ranges over [-1/k, (k-1)/k]; both endpoints are legal and put a
    class probability at exactly 0 or 1.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    lo, hi = -1.0 / k, (k - 1.0) / k
    if epsilon < lo - _SIMPLEX_TOL or epsilon > hi + _SIMPLEX_TOL:
        raise ValueError(f"epsilon must lie in [{lo}, {hi}]")
    epsilon = min(max(epsilon, lo), hi)
    first = 1.0 / k + epsilon
    rest = 1.0 / k - epsilon / (k - 1)
    # clip float dust so the simplex invariant holds at the endpoints
    first = min(max(first, 0.0), 1.0)
    rest = min(max(rest, 0.0), 1.0)
    return ClassDistribution((first,) + tuple([rest] * (k - 1)))


def imbalance_kind(eta: ClassDistribution) -> str:
    """One of 'balanced', 'multi-majority', 'multi-minority'.

    Balanced means eta equals the uniform distribution within 1e-12.
    Otherwise the classes at or above 1/K form the majority set M and
    the rest the minority set m; the label is multi-majority when
    |M| >= K/2 and multi-minority when |m| > K/2.  Exactly one of the
    two holds, so the classification is total.
    """
    e = np.asarray(eta.eta, dtype=float)
    k = e.size
    if np.all(np.abs(e - 1.0 / k) <= _BALANCED_TOL):
        return "balanced"
    n_major = int(np.count_nonzero(e >= 1.0 / k))
    if n_major >= k / 2.0:
        return "multi-majority"
    return "multi-minority"
