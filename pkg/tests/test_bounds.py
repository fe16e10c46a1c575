"""Competitiveness bounds: closed forms, soundness, verdict bands."""

import math

import numpy as np
import pytest

from imbalab import CompetitivenessVerdict, HolderSpec, holder_mean, s_inf, s_sup, verdict


def test_s_sup_known_values():
    assert s_sup(2, 1.0) == 0.75
    assert s_sup(2, -1.0) == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert s_sup(3, 0.0) == pytest.approx(3.0 ** (-1.0 / 3.0), abs=1e-15)
    assert s_sup(2, math.inf) == 1.0
    for k in range(2, 11):
        assert s_sup(k, -math.inf) == s_inf(k)


def test_s_inf_values():
    assert s_inf(2) == 0.5
    assert s_inf(3) == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert s_inf(10) == pytest.approx(0.1, abs=1e-15)


def test_s_sup_monotone_in_p():
    for k in (2, 3, 5):
        ps = np.arange(-50.0, 50.5, 0.5)
        vals = [s_sup(k, float(p)) for p in ps]
        assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
        assert all(s_inf(k) <= v <= 1.0 for v in vals)


def test_s_sup_is_the_one_weak_class_profile():
    # the bound is the mean of one minimum-competitive recall among
    # perfect ones, so it must match the kernel evaluated there
    for k in (2, 3, 4):
        for p in (-2.0, 0.0, 1.0, 3.0):
            direct = holder_mean((1.0 / k,) + (1.0,) * (k - 1), HolderSpec.uniform(k, p))
            assert s_sup(k, p) == pytest.approx(direct, abs=1e-15)


def test_soundness_brute_force():
    # above s_sup every recall beats 1/K; below s_inf none is needed
    rng = np.random.default_rng(31)
    for k in (2, 3):
        for p in (-math.inf, -1.0, 0.0, 1.0):
            spec = HolderSpec.uniform(k, p)
            hi = s_sup(k, p)
            lo = s_inf(k)
            crossed = 0
            for _ in range(4000):
                r = rng.uniform(0.0, 1.0, size=k)
                m = holder_mean(r, spec)
                if m >= hi:
                    crossed += 1
                    assert r.min() > 1.0 / k - 1e-12, (k, p, r)
                if r.min() <= 1.0 / k and r.max() <= 1.0:
                    # a fully non-competitive vector can never beat s_sup
                    if np.all(r <= 1.0 / k):
                        assert m < hi + 1e-12
            assert crossed > 0, f"grid never crossed the bound for k={k}, p={p}"


def test_verdict_bands():
    assert verdict(0.8, 2, 1.0).band == "SUPERIOR"
    assert verdict(0.75, 2, 1.0).band == "SUPERIOR"
    assert verdict(0.6, 2, 1.0).band == "INDETERMINATE"
    assert verdict(0.4, 2, 1.0).band == "INFERIOR"
    assert verdict(0.4999999, 2, 1.0).band == "INFERIOR"
    assert verdict(0.5, 2, 1.0).band == "INDETERMINATE"
    assert verdict(0.51, 2, -math.inf).band == "SUPERIOR"
    assert verdict(0.2, 3, 0.0).band == "INFERIOR"


def test_verdict_partitions_the_interval():
    for k in (2, 3, 4):
        for p in (-math.inf, -1.0, 0.0, 1.0, math.inf):
            for v in np.linspace(0.0, 1.0, 101):
                band = verdict(float(v), k, p).band
                hi = s_sup(k, p)
                lo = s_inf(k)
                if v >= hi:
                    assert band == "SUPERIOR"
                elif v < lo:
                    assert band == "INFERIOR"
                else:
                    assert band == "INDETERMINATE"


def test_verdict_fields_and_validation():
    out = verdict(0.9, 3, -1.0)
    assert out.k == 3 and out.p == -1.0
    assert out.s_inf == pytest.approx(1.0 / 3.0)
    assert out.s_sup == pytest.approx(s_sup(3, -1.0))
    with pytest.raises(ValueError):
        verdict(-0.1, 2, 1.0)
    with pytest.raises(ValueError):
        verdict(1.1, 2, 1.0)
    with pytest.raises(ValueError):
        verdict(math.nan, 2, 1.0)
    with pytest.raises(ValueError):
        s_sup(1, 1.0)
    with pytest.raises(ValueError):
        CompetitivenessVerdict("MAYBE", 0.75, 0.5, 1.0, 2)
    with pytest.raises(ValueError):
        CompetitivenessVerdict("SUPERIOR", 0.75, 0.4, 1.0, 2)
