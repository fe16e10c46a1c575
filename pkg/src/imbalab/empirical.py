"""Seeded sampling, rebalancing, and empirical confusion matrices.

The random source is the counter-based Philox generator keyed by
(seed, purpose tag), so sampling, oversampling, and undersampling draw
from disjoint streams and every result is reproducible bit for bit from
(model, n, seed).  Gaussian variates come from the inverse-CDF
transform rather than rejection, keeping the draw count per record
fixed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gaussian import norm_ppf
from .metrics import ConfusionMatrix
from .model import ClassDistribution, GaussianMixtureModel
from .rules import ThresholdRule, bdr, classify

__all__ = [
    "LabeledSample",
    "sample",
    "ros",
    "rus",
    "fit_plugin_rule",
    "empirical_confusion",
]

_TAG_SAMPLE = 0
_TAG_ROS = 1
_TAG_RUS = 2


def _stream(seed: int, tag: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed, tag]))


def _check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)) or not 0 <= int(seed) < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return int(seed)


@dataclass(frozen=True, slots=True)
class LabeledSample:
    """Univariate draws with 1-based class labels and their provenance."""

    x: np.ndarray
    labels: np.ndarray
    seed: int
    model: GaussianMixtureModel

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=float).copy()
        labels = np.asarray(self.labels, dtype=np.int64).copy()
        if x.ndim != 1 or labels.shape != x.shape:
            raise ValueError("x and labels must be 1-D arrays of equal length")
        if x.size < 1:
            raise ValueError("a sample needs at least one record")
        if not np.all(np.isfinite(x)):
            raise ValueError("sample values must be finite")
        if labels.min() < 1 or labels.max() > self.model.k:
            raise ValueError("labels must lie in [1, K]")
        _check_seed(self.seed)
        x.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.x.size

    @property
    def records(self) -> list[tuple[float, int]]:
        return [(float(v), int(c)) for v, c in zip(self.x, self.labels)]

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.model.k + 1)[1:]


def sample(model: GaussianMixtureModel, n: int, seed: int) -> LabeledSample:
    """n i.i.d. draws: class by cumulative-prior inversion, then x by Phi^-1."""
    if n < 1:
        raise ValueError("n must be at least 1")
    seed = _check_seed(seed)
    u = _stream(seed, _TAG_SAMPLE).random((n, 2))
    cum = np.cumsum(np.asarray(model.eta.eta))
    labels = np.searchsorted(cum, u[:, 0], side="right") + 1
    # cumulative-sum dust can leave cum[-1] a hair under 1
    labels = np.minimum(labels, model.k)
    mu = np.asarray(model.means)[labels - 1]
    # u = 0 would map to -inf under the inverse CDF
    x = mu + model.sigma * norm_ppf(np.maximum(u[:, 1], np.finfo(float).tiny))
    return LabeledSample(x=x, labels=labels, seed=seed, model=model)


def ros(s: LabeledSample) -> LabeledSample:
    """Random oversampling: replicate every class up to the largest count."""
    counts = s.class_counts()
    if np.any(counts == 0):
        raise ValueError("every class needs at least one record to oversample")
    target = int(counts.max())
    rng = _stream(s.seed, _TAG_ROS)
    xs = [s.x]
    ls = [s.labels]
    for c in range(1, s.model.k + 1):
        deficit = target - int(counts[c - 1])
        if deficit == 0:
            continue
        idx = np.flatnonzero(s.labels == c)
        pick = rng.integers(0, idx.size, size=deficit)
        xs.append(s.x[idx[pick]])
        ls.append(np.full(deficit, c, dtype=np.int64))
    return LabeledSample(
        x=np.concatenate(xs), labels=np.concatenate(ls), seed=s.seed, model=s.model
    )


def rus(s: LabeledSample) -> LabeledSample:
    """Random undersampling: thin every class down to the smallest count."""
    counts = s.class_counts()
    if np.any(counts == 0):
        raise ValueError("every class needs at least one record to undersample")
    target = int(counts.min())
    rng = _stream(s.seed, _TAG_RUS)
    keep = []
    for c in range(1, s.model.k + 1):
        idx = np.flatnonzero(s.labels == c)
        if idx.size > target:
            idx = np.sort(rng.choice(idx, size=target, replace=False))
        keep.append(idx)
    order = np.sort(np.concatenate(keep))
    return LabeledSample(x=s.x[order], labels=s.labels[order], seed=s.seed, model=s.model)


def fit_plugin_rule(s: LabeledSample, sigma_known: float | None = None) -> ThresholdRule:
    """Bayes rule of the plug-in model: frequency priors, class means, pooled sigma."""
    k = s.model.k
    counts = s.class_counts()
    if np.any(counts == 0):
        raise ValueError("cannot fit: some class has no records")
    if sigma_known is None and np.any(counts < 2):
        raise ValueError(
            "cannot fit: a class with fewer than 2 records gives no spread estimate"
        )
    means = np.empty(k)
    ss = 0.0
    for c in range(1, k + 1):
        xc = s.x[s.labels == c]
        means[c - 1] = xc.mean()
        ss += float(((xc - means[c - 1]) ** 2).sum())
    if np.any(np.diff(means) <= 0.0):
        raise ValueError(
            "cannot fit: per-class means are not increasing, so fitted regions "
            "would not align with the true class order"
        )
    if sigma_known is not None:
        if not sigma_known > 0.0:
            raise ValueError("sigma_known must be positive")
        sigma = float(sigma_known)
    else:
        sigma = float(np.sqrt(ss / (s.n - k)))
        if sigma == 0.0:
            raise ValueError("cannot fit: pooled spread is zero")
    eta = ClassDistribution(tuple(float(c) / s.n for c in counts))
    fitted = GaussianMixtureModel(means=tuple(means), sigma=sigma, eta=eta)
    return bdr(fitted)


def empirical_confusion(s: LabeledSample, rule: ThresholdRule) -> ConfusionMatrix:
    """Relative-frequency confusion matrix of `rule` on the sample."""
    k = s.model.k
    if rule.k != k:
        raise ValueError("rule and sample class counts differ")
    pred = np.asarray(classify(rule, s.x))
    cells = np.bincount((s.labels - 1) * k + (pred - 1), minlength=k * k)
    return ConfusionMatrix(a=cells.reshape(k, k) / s.n, provenance="empirical")
