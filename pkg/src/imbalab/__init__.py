"""Numerical laboratory for performance scores under class imbalance.

Univariate homoscedastic Gaussian mixtures, threshold decision rules,
exact confusion matrices, Holder-mean score reports, the influence of
imbalance on each score, competitiveness bounds against the uniform
random baseline, score-optimal rule search, and a seeded Monte-Carlo
engine with plug-in fitting.
"""

from ._version import __version__
from .bounds import CompetitivenessVerdict, s_inf, s_sup, verdict
from .empirical import LabeledSample, empirical_confusion, fit_plugin_rule, ros, rus, sample
from .holder import HolderSpec, holder_mean, pythagorean_check
from .influence import (
    INTEGRATION_DOMAIN,
    InfluenceCurve,
    QuadratureError,
    default_grid,
    influence_binary,
    influence_multiclass,
    integrate_adaptive,
    sweep,
)
from .metrics import (
    GLOBAL_SCORES,
    LOCAL_SCORES,
    SCORE_KINDS,
    ConfusionMatrix,
    ScoreReport,
    bayes_error,
    rand_confusion,
    scores,
    true_confusion,
)
from .model import (
    ClassDistribution,
    GaussianMixtureModel,
    delta_family,
    epsilon_distribution,
    imbalance_kind,
)
from .rules import CostMatrix, ThresholdRule, bdr, cs_bdr, classify, edr, japkowicz_costs
from .search import (
    OptimalityCheck,
    SearchResult,
    UnsupportedDimensionError,
    WitnessReport,
    edr_nonoptimality_witness,
    edr_optimality_check,
    equal_recall_cuts,
    optimize_rule,
)

__all__ = [
    "__version__",
    "HolderSpec",
    "holder_mean",
    "pythagorean_check",
    "ClassDistribution",
    "GaussianMixtureModel",
    "delta_family",
    "epsilon_distribution",
    "imbalance_kind",
    "ThresholdRule",
    "CostMatrix",
    "bdr",
    "edr",
    "cs_bdr",
    "japkowicz_costs",
    "classify",
    "ConfusionMatrix",
    "ScoreReport",
    "GLOBAL_SCORES",
    "LOCAL_SCORES",
    "SCORE_KINDS",
    "true_confusion",
    "scores",
    "rand_confusion",
    "bayes_error",
    "QuadratureError",
    "integrate_adaptive",
    "influence_binary",
    "influence_multiclass",
    "InfluenceCurve",
    "default_grid",
    "sweep",
    "INTEGRATION_DOMAIN",
    "CompetitivenessVerdict",
    "s_sup",
    "s_inf",
    "verdict",
    "SearchResult",
    "OptimalityCheck",
    "WitnessReport",
    "UnsupportedDimensionError",
    "optimize_rule",
    "edr_optimality_check",
    "edr_nonoptimality_witness",
    "equal_recall_cuts",
    "LabeledSample",
    "sample",
    "ros",
    "rus",
    "fit_plugin_rule",
    "empirical_confusion",
]
