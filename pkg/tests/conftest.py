"""Shared fixtures and random-instance helpers for the test suite."""

import numpy as np
import pytest

from imbalab import ClassDistribution, GaussianMixtureModel, ThresholdRule

# Worked three-class example used across modules: well separated left
# class, overlapping middle and right classes, majority mass on the left.
REFERENCE_MEANS = (3.0, 5.0, 6.0)
REFERENCE_SIGMA = 0.5
REFERENCE_ETA = (0.6, 0.3, 0.1)


@pytest.fixture
def reference_model() -> GaussianMixtureModel:
    return GaussianMixtureModel(REFERENCE_MEANS, REFERENCE_SIGMA, ClassDistribution(REFERENCE_ETA))


def random_simplex(rng: np.random.Generator, k: int, min_mass: float = 0.01) -> ClassDistribution:
    """Random distribution with every class probability >= min_mass."""
    raw = rng.dirichlet(np.ones(k))
    raw = min_mass + (1.0 - k * min_mass) * raw
    raw[-1] = 1.0 - raw[:-1].sum()
    return ClassDistribution(tuple(float(v) for v in raw))


def random_model(
    rng: np.random.Generator,
    k: int | None = None,
    min_gap: float = 0.4,
    max_spread: float = 6.0,
    min_mass: float = 0.01,
) -> GaussianMixtureModel:
    """Random homoscedastic mixture with sorted, well separated means.

    Spreads are kept moderate so search grids stay small and overlap
    regions carry visible probability mass.
    """
    if k is None:
        k = int(rng.integers(2, 4))
    gaps = rng.uniform(min_gap, max_spread / k, size=k - 1)
    start = rng.uniform(-3.0, 3.0)
    means = start + np.concatenate(([0.0], np.cumsum(gaps)))
    sigma = float(rng.uniform(0.3, 2.0))
    return GaussianMixtureModel(tuple(float(m) for m in means), sigma, random_simplex(rng, k, min_mass))


def random_rule(rng: np.random.Generator, model: GaussianMixtureModel) -> ThresholdRule:
    """Random rule with cuts inside the model's populated range."""
    lo = min(model.means) - 2.0 * model.sigma
    hi = max(model.means) + 2.0 * model.sigma
    cuts = np.sort(rng.uniform(lo, hi, size=model.k - 1))
    return ThresholdRule(tuple(float(c) for c in cuts))


def dense_argmax_labels(model: GaussianMixtureModel, x: np.ndarray) -> np.ndarray:
    """Oracle classifier: argmax of eta_i * N(x; mu_i, sigma), lowest index wins."""
    mu = np.asarray(model.means)
    eta = np.asarray(model.eta.eta)
    z = (x[None, :] - mu[:, None]) / model.sigma
    # the shared 1/(sigma sqrt(2 pi)) factor cannot change the argmax
    logw = np.where(eta[:, None] > 0.0, np.log(np.maximum(eta, 1e-300))[:, None] - 0.5 * z**2, -np.inf)
    return np.argmax(logw, axis=0) + 1
