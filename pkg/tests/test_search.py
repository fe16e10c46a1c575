"""Score-optimal rule search, optimality checks, and witness scans."""

import math

import numpy as np
import pytest

from imbalab import (
    ClassDistribution,
    GaussianMixtureModel,
    UnsupportedDimensionError,
    bdr,
    edr,
    edr_nonoptimality_witness,
    edr_optimality_check,
    equal_recall_cuts,
    optimize_rule,
    scores,
    true_confusion,
)

from conftest import random_model

MIN_DR_CUTS = (3.4986179130724153, 5.501382086927585)
MIN_DR_RECALL = 0.8406749725116212


def test_a_mean_search_finds_edr(reference_model):
    res = optimize_rule(reference_model, "a_mean")
    assert res.rule.cuts == pytest.approx((4.0, 5.5), abs=1e-5)
    assert res.score_value == pytest.approx(0.8790630760802426, abs=1e-9)
    assert res.evaluations > 0
    assert res.grid_step == pytest.approx(0.01 * reference_model.sigma)


def test_acc_search_finds_bdr(reference_model):
    res = optimize_rule(reference_model, "acc")
    want = scores(true_confusion(reference_model, bdr(reference_model))).acc
    assert res.rule.cuts == pytest.approx(bdr(reference_model).cuts, abs=1e-3)
    assert want - 1e-8 <= res.score_value <= want + 1e-12


def test_max_r_search_degenerates(reference_model):
    res = optimize_rule(reference_model, "max_r")
    assert res.score_value == 1.0
    rep = scores(true_confusion(reference_model, res.rule))
    assert max(rep.recalls) == 1.0


def test_min_r_search_equalizes_recalls(reference_model):
    res = optimize_rule(reference_model, "min_r")
    assert res.rule.cuts == pytest.approx(MIN_DR_CUTS, abs=1e-3)
    rep = scores(true_confusion(reference_model, res.rule))
    assert max(rep.recalls) - min(rep.recalls) <= 1e-3
    assert res.score_value == pytest.approx(MIN_DR_RECALL, abs=1e-4)


def test_equal_recall_cuts_oracle(reference_model):
    rule = equal_recall_cuts(reference_model)
    assert rule.cuts == pytest.approx(MIN_DR_CUTS, abs=1e-9)
    rep = scores(true_confusion(reference_model, rule))
    assert rep.recalls == pytest.approx((MIN_DR_RECALL,) * 3, abs=1e-9)
    binary = GaussianMixtureModel((0.0, 2.0), 1.0, ClassDistribution((0.9, 0.1)))
    rule2 = equal_recall_cuts(binary)
    assert rule2.cuts == pytest.approx((1.0,), abs=1e-12)


def test_g_and_h_searches_sit_between_edr_and_min_dr_on_the_first_cut(reference_model):
    g = optimize_rule(reference_model, "g_mean")
    h = optimize_rule(reference_model, "h_mean")
    assert g.rule.cuts == pytest.approx((3.9788457988, 5.5047904196), abs=1e-4)
    assert h.rule.cuts == pytest.approx((3.9592088655, 5.5071017050), abs=1e-4)
    assert g.score_value == pytest.approx(0.876437815135, abs=1e-9)
    assert h.score_value == pytest.approx(0.874037389329, abs=1e-9)
    # first cut interpolates between the min-recall rule and EDR, and the
    # g optimum sits closer to EDR than the h optimum
    assert MIN_DR_CUTS[0] < h.rule.cuts[0] < g.rule.cuts[0] < 4.0
    # the second cut does not interpolate: both optima overshoot the
    # EDR / min-DR bracket on the right, which is real behaviour here
    bracket_hi = max(5.5, MIN_DR_CUTS[1])
    assert g.rule.cuts[1] > bracket_hi
    assert h.rule.cuts[1] > bracket_hi


def test_search_result_is_certified_local_optimum(reference_model):
    res = optimize_rule(reference_model, "g_mean", refine_tol=1e-6)
    base = res.score_value
    for i, c in enumerate(res.rule.cuts):
        for d in (-5e-6, 5e-6):
            cuts = list(res.rule.cuts)
            cuts[i] = c + d
            if cuts != sorted(cuts):
                continue
            from imbalab import ThresholdRule

            nearby = scores(true_confusion(reference_model, ThresholdRule(tuple(cuts)))).g_mean
            assert nearby <= base + 1e-9


def test_search_score_matches_metrics_path():
    rng = np.random.default_rng(41)
    for _ in range(4):
        m = random_model(rng, k=2)
        for kind in ("a_mean", "g_mean", "min_r"):
            res = optimize_rule(m, kind)
            again = scores(true_confusion(m, res.rule)).value(kind)
            assert again == pytest.approx(res.score_value, abs=1e-12)


def test_search_beats_both_reference_rules():
    rng = np.random.default_rng(42)
    for _ in range(5):
        m = random_model(rng, k=int(rng.integers(2, 4)))
        for kind in ("a_mean", "g_mean", "h_mean"):
            res = optimize_rule(m, kind)
            for ref in (bdr(m), edr(m)):
                ref_score = scores(true_confusion(m, ref)).value(kind)
                assert res.score_value >= ref_score - 1e-9


def test_search_is_deterministic(reference_model):
    r1 = optimize_rule(reference_model, "g_mean")
    r2 = optimize_rule(reference_model, "g_mean")
    assert r1.rule.cuts == r2.rule.cuts
    assert r1.score_value == r2.score_value
    assert r1.evaluations == r2.evaluations


def test_search_validation(reference_model):
    with pytest.raises(ValueError):
        optimize_rule(reference_model, "f1")
    with pytest.raises(ValueError):
        optimize_rule(reference_model, "a_mean", grid_step=0.0)
    with pytest.raises(ValueError):
        optimize_rule(reference_model, "a_mean", refine_tol=-1.0)
    wide = GaussianMixtureModel((0.0, 1.0, 2.0, 3.0), 1.0, ClassDistribution.uniform(4))
    with pytest.raises(UnsupportedDimensionError):
        optimize_rule(wide, "a_mean")
    assert issubclass(UnsupportedDimensionError, ValueError)


def test_edr_optimality_check(reference_model):
    chk = edr_optimality_check(reference_model)
    assert chk.holds
    assert chk.margin <= 1e-6
    assert chk.edr_value == pytest.approx(0.8790630760802426, abs=1e-12)
    assert chk.result.score_kind == "a_mean"
    rng = np.random.default_rng(43)
    for _ in range(3):
        m = random_model(rng, k=2)
        assert edr_optimality_check(m).holds


def test_witness_default_scan_finds_g_mean_case():
    rep = edr_nonoptimality_witness()
    assert rep.found
    assert rep.score_kind in ("g_mean", "h_mean", "min_r")
    assert rep.improvement > 1e-4
    assert rep.nodes_scanned >= 1
    # the witness is reproducible: re-optimizing its model beats its EDR
    edr_score = scores(true_confusion(rep.model, edr(rep.model))).value(rep.score_kind)
    beat = scores(true_confusion(rep.model, rep.rule)).value(rep.score_kind)
    assert beat - edr_score == pytest.approx(rep.improvement, abs=1e-12)
    assert rep.improvement == pytest.approx(0.044681, abs=1e-3)


def test_witness_respects_fixed_scan():
    rep = edr_nonoptimality_witness(
        k=2, score_kinds=("a_mean",), deltas=(1.0,), epsilons=(0.2,)
    )
    assert not rep.found
    assert rep.model is None and rep.rule is None
    assert rep.improvement == 0.0
    assert rep.nodes_scanned == 1
