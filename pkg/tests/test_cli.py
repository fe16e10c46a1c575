"""End-to-end CLI behaviour via subprocess, plus the exit-code contract."""

import math
import subprocess
import sys

import numpy as np
import pytest

import imbalab.cli as cli
from imbalab import ClassDistribution, GaussianMixtureModel, QuadratureError
from imbalab.fileio import read_rule, read_sample, write_model

REFERENCE = GaussianMixtureModel((3.0, 5.0, 6.0), 0.5, ClassDistribution((0.6, 0.3, 0.1)))


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "imbalab", *args], capture_output=True, text=True
    )


def parse_rows(text):
    rows = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    header = rows[0].split(",")
    return header, [r.split(",") for r in rows[1:]]


@pytest.fixture
def model_file(tmp_path):
    path = str(tmp_path / "model.csv")
    write_model(path, REFERENCE)
    return path


def test_version():
    out = run_cli("--version")
    assert out.returncode == 0
    assert out.stdout.strip() == "imbalab 0.1.0"


def test_scores_edr_to_stdout(model_file):
    out = run_cli("scores", "--model", model_file, "--rule", "edr")
    assert out.returncode == 0
    header, rows = parse_rows(out.stdout)
    assert header == ["score", "value"]
    vals = {r[0]: float(r[1]) for r in rows}
    assert vals["acc"] == pytest.approx(0.916062779674, abs=1e-9)
    assert vals["a_mean"] == pytest.approx(0.879063076080, abs=1e-9)
    assert vals["min_r"] == pytest.approx(0.818594614120, abs=1e-9)
    assert vals["recall_1"] == pytest.approx(0.977249868052, abs=1e-9)
    assert vals["precision_1"] == pytest.approx(0.988488775, abs=1e-8)
    assert "# cuts=4,5.5" in out.stdout


def test_scores_with_explicit_cuts(model_file, tmp_path):
    dest = str(tmp_path / "scores.csv")
    out = run_cli(
        "scores", "--model", model_file, "--rule", "cuts=4,5.5", "--out", dest
    )
    assert out.returncode == 0
    assert out.stdout == ""
    _, rows = parse_rows(open(dest).read())
    vals = {r[0]: float(r[1]) for r in rows}
    assert vals["acc"] == pytest.approx(0.916062779674, abs=1e-9)


def test_scores_from_confusion_file(tmp_path):
    path = str(tmp_path / "cm.csv")
    with open(path, "w") as fh:
        fh.write("k=3;provenance=analytic\n")
        for i in range(3):
            row = ["0.111111111111111"] * 3
            fh.write(",".join(row) + "\n")
    out = run_cli("scores", "--confusion", path)
    assert out.returncode == 0
    _, rows = parse_rows(out.stdout)
    vals = {r[0]: float(r[1]) for r in rows}
    assert vals["acc"] == pytest.approx(1 / 3, abs=1e-9)
    assert vals["g_mean"] == pytest.approx(1 / 3, abs=1e-9)


def test_scores_usage_errors(model_file, tmp_path):
    cm = str(tmp_path / "cm.csv")
    with open(cm, "w") as fh:
        fh.write("k=2;provenance=analytic\n0.5,0\n0,0.5\n")
    assert run_cli("scores", "--model", model_file, "--confusion", cm).returncode == 1
    assert run_cli("scores").returncode == 1
    assert run_cli("scores", "--confusion", cm, "--rule", "edr").returncode == 1
    assert run_cli("scores", "--model", model_file, "--rule", "best").returncode == 1


def test_parse_failures_exit_2(tmp_path):
    bad = str(tmp_path / "bad.csv")
    with open(bad, "w") as fh:
        fh.write("K=3\nmeans=oops\nsigma=1\neta=0.5,0.3,0.2\n")
    out = run_cli("scores", "--model", bad, "--rule", "edr")
    assert out.returncode == 2
    assert "bad.csv:2" in out.stderr
    missing = run_cli("scores", "--model", str(tmp_path / "nope.csv"), "--rule", "edr")
    assert missing.returncode == 2


def test_influence_grid(tmp_path):
    dest = str(tmp_path / "inf.csv")
    out = run_cli(
        "influence", "--K", "2", "--scores", "acc",
        "--grid", "0.1:0.9:0.1", "--out", dest,
    )
    assert out.returncode == 0
    header, rows = parse_rows(open(dest).read())
    assert header == ["score", "K", "parameter_kind", "parameter", "influence", "quad_error"]
    assert len(rows) == 9
    by_eta = {float(r[3]): float(r[4]) for r in rows}
    assert by_eta[0.5] == 0.0
    assert by_eta[0.1] == pytest.approx(-0.525185866369, abs=1e-6)
    assert by_eta[0.9] == pytest.approx(by_eta[0.1], abs=1e-5)
    assert all(float(r[5]) <= 1e-6 for r in rows)
    assert all(r[2] == "eta" for r in rows)


def test_influence_multiclass_kind(tmp_path):
    out = run_cli(
        "influence", "--K", "3", "--scores", "g_mean,acc", "--grid", "-0.02:0.02:0.02"
    )
    assert out.returncode == 0
    _, rows = parse_rows(out.stdout)
    assert len(rows) == 6
    assert {r[2] for r in rows} == {"epsilon"}
    kinds = [r[0] for r in rows]
    assert kinds == ["g_mean"] * 3 + ["acc"] * 3


def test_influence_bad_grid():
    assert run_cli("influence", "--K", "2", "--scores", "acc", "--grid", "0.9:0.1:0.1").returncode == 1
    assert run_cli("influence", "--K", "2", "--scores", "acc", "--grid", "0.1:0.9:0").returncode == 1
    assert run_cli("influence", "--K", "2", "--scores", "nope").returncode == 1
    # multi-class grids must stay inside the legal epsilon range
    assert run_cli("influence", "--K", "3", "--scores", "acc", "--grid", "0:0.9:0.1").returncode == 1


def test_bounds_table(tmp_path):
    out = run_cli("bounds", "--K", "3", "--p-range", "-2:2:1")
    assert out.returncode == 0
    header, rows = parse_rows(out.stdout)
    assert header == ["K", "p", "s_inf", "s_sup"]
    assert [r[1] for r in rows] == ["-2", "-1", "0", "1", "2"]
    assert all(float(r[2]) == pytest.approx(1 / 3, abs=1e-9) for r in rows)
    sups = [float(r[3]) for r in rows]
    assert sups == sorted(sups)
    full = run_cli("bounds", "--K", "2")
    _, rows = parse_rows(full.stdout)
    assert len(rows) == 201


def test_verdict_rows():
    out = run_cli("verdict", "--K", "2", "--p", "1", "--value", "0.8")
    assert out.returncode == 0
    header, rows = parse_rows(out.stdout)
    assert header == ["band", "K", "p", "value", "s_inf", "s_sup"]
    assert rows[0][0] == "SUPERIOR"
    assert run_cli("verdict", "--K", "2", "--p", "-inf", "--value", "0.51").stdout.count("SUPERIOR") == 1
    out = run_cli("verdict", "--K", "3", "--p", "0", "--value", "0.2")
    assert "INFERIOR" in out.stdout
    assert run_cli("verdict", "--K", "2", "--p", "1", "--value", "1.4").returncode == 1


def test_search_subcommand(model_file, tmp_path):
    dest = str(tmp_path / "search.csv")
    out = run_cli("search", "--model", model_file, "--score", "min", "--out", dest)
    assert out.returncode == 0
    header, rows = parse_rows(open(dest).read())
    assert header == ["score", "cut_1", "cut_2", "score_value", "evaluations"]
    assert rows[0][0] == "min_r"
    cuts = (float(rows[0][1]), float(rows[0][2]))
    assert cuts == pytest.approx((3.4986179130724153, 5.501382086927585), abs=1e-3)
    assert float(rows[0][3]) == pytest.approx(0.8406749725116212, abs=1e-4)


def test_sample_rebalance_fit_pipeline(model_file, tmp_path):
    sample_path = str(tmp_path / "s.csv")
    out = run_cli("sample", "--model", model_file, "--n", "2000", "--seed", "5", "--out", sample_path)
    assert out.returncode == 0
    s = read_sample(sample_path)
    assert s.n == 2000

    ros_path = str(tmp_path / "ros.csv")
    out = run_cli("rebalance", "--sample", sample_path, "--method", "ros", "--out", ros_path)
    assert out.returncode == 0
    r = read_sample(ros_path)
    assert r.class_counts().min() == r.class_counts().max()

    rule_path = str(tmp_path / "rule.csv")
    out = run_cli("fit", "--sample", ros_path, "--out", rule_path)
    assert out.returncode == 0
    rule = read_rule(rule_path)
    assert rule.cuts == pytest.approx((4.0, 5.5), abs=0.2)


def test_sample_rerun_is_byte_identical(model_file, tmp_path):
    dest = str(tmp_path / "s.csv")
    assert run_cli("sample", "--model", model_file, "--n", "50", "--seed", "9", "--out", dest).returncode == 0
    first = open(dest, "rb").read()
    assert run_cli("sample", "--model", model_file, "--n", "50", "--seed", "9", "--out", dest).returncode == 0
    assert open(dest, "rb").read() == first


def test_plot_flags_write_figures(model_file, tmp_path):
    figures = {
        "influence": ("influence", "--K", "2", "--scores", "acc", "--grid", "0.3:0.7:0.2"),
        "bounds": ("bounds", "--K", "2", "--p-range", "-5:5:1"),
        "search": ("search", "--model", model_file, "--score", "a_mean"),
    }
    for name, args in figures.items():
        fig = str(tmp_path / f"{name}.png")
        dest = str(tmp_path / f"{name}.csv")
        out = run_cli(*args, "--plot", fig, "--out", dest)
        assert out.returncode == 0, out.stderr
        blob = open(fig, "rb").read()
        assert blob[:8] == b"\x89PNG\r\n\x1a\n"
        assert len(blob) > 1000


def test_quadrature_failure_exit_code(monkeypatch, capsys):
    def boom(*args, **kwargs):
        raise QuadratureError(0.0, 1.0)

    monkeypatch.setattr(cli, "sweep", boom)
    code = cli.main(["influence", "--K", "2", "--scores", "acc", "--grid", "0.4:0.6:0.1"])
    assert code == 3
    assert "quadrature" in capsys.readouterr().err.lower()


def test_unreadable_output_path_exit_code(model_file, tmp_path):
    dest = str(tmp_path / "no" / "such" / "dir" / "out.csv")
    out = run_cli("scores", "--model", model_file, "--rule", "edr", "--out", dest)
    assert out.returncode == 2
