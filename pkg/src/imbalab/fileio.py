"""Text formats: model files, rule lines, confusion CSV, sample CSV.

Every output file starts with a `#`-prefixed manifest recording the
subcommand and all resolved parameters, so a run can be reproduced from
its own output.  Manifests carry no timestamps: identical parameters
must give byte-identical files.  Floats print with 12 significant
digits; extended reals as `-inf`/`inf`.  Writes go through a temp file
and an atomic rename.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from ._version import __version__
from .empirical import LabeledSample
from .metrics import ConfusionMatrix
from .model import ClassDistribution, GaussianMixtureModel
from .rules import ThresholdRule

__all__ = [
    "ParseError",
    "RunManifest",
    "fmt_float",
    "write_atomic",
    "render_table",
    "write_model",
    "read_model",
    "format_rule",
    "parse_rule",
    "write_rule",
    "read_rule",
    "write_confusion",
    "read_confusion",
    "render_sample",
    "write_sample",
    "read_sample",
    "sample_header_entries",
]

FLOAT_FMT = "%.12g"


class ParseError(ValueError):
    """Malformed input file; carries the 1-based offending line number."""

    def __init__(self, path: str, line_no: int, message: str):
        self.path = path
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


def fmt_float(x: float) -> str:
    if math.isinf(x):
        return "-inf" if x < 0 else "inf"
    return FLOAT_FMT % x


def _parse_float(token: str, path: str, line_no: int) -> float:
    t = token.strip()
    try:
        v = float(t)
    except ValueError:
        raise ParseError(path, line_no, f"not a number: {t!r}") from None
    if math.isnan(v):
        raise ParseError(path, line_no, "NaN is not a valid value")
    return v


@dataclass(frozen=True, slots=True)
class RunManifest:
    """Resolved invocation record, emitted as `# key=value` header lines."""

    subcommand: str
    params: tuple[tuple[str, str], ...]
    version: str = __version__

    def lines(self) -> list[str]:
        out = [f"# imbalab={self.version}", f"# subcommand={self.subcommand}"]
        out.extend(f"# {k}={v}" for k, v in self.params)
        return out


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".imbalab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def render_table(manifest: RunManifest | None, header: str, rows: list[str]) -> str:
    lines = manifest.lines() if manifest is not None else []
    lines.append(header)
    lines.extend(rows)
    return "\n".join(lines) + "\n"


# -- model files ---------------------------------------------------------

def write_model(path: str, model: GaussianMixtureModel) -> None:
    text = "\n".join(
        [
            f"K={model.k}",
            "means=" + ",".join(fmt_float(m) for m in model.means),
            "sigma=" + fmt_float(model.sigma),
            "eta=" + ",".join(fmt_float(e) for e in model.eta.eta),
        ]
    )
    write_atomic(path, text + "\n")


def _model_from_entries(
    entries: dict[str, tuple[str, int]], path: str
) -> GaussianMixtureModel:
    for key in ("K", "means", "sigma", "eta"):
        if key not in entries:
            raise ParseError(path, 1, f"missing required key {key!r}")
    raw, ln = entries["K"]
    try:
        k = int(raw)
    except ValueError:
        raise ParseError(path, ln, f"K must be an integer, got {raw!r}") from None
    raw, ln = entries["means"]
    means = tuple(_parse_float(t, path, ln) for t in raw.split(","))
    raw, ln = entries["sigma"]
    sigma = _parse_float(raw, path, ln)
    raw, ln = entries["eta"]
    eta = tuple(_parse_float(t, path, ln) for t in raw.split(","))
    if len(means) != k or len(eta) != k:
        raise ParseError(path, ln, f"expected {k} means and {k} eta entries")
    try:
        return GaussianMixtureModel(means=means, sigma=sigma, eta=ClassDistribution(eta))
    except ValueError as exc:
        raise ParseError(path, ln, str(exc)) from None


def read_model(path: str) -> GaussianMixtureModel:
    entries: dict[str, tuple[str, int]] = {}
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ParseError(path, line_no, f"expected key=value, got {line!r}")
            key = key.strip()
            if key in entries:
                raise ParseError(path, line_no, f"duplicate key {key!r}")
            entries[key] = (value.strip(), line_no)
    return _model_from_entries(entries, path)


# -- rule lines ----------------------------------------------------------

def format_rule(rule: ThresholdRule) -> str:
    return "cuts=" + ",".join(fmt_float(c) for c in rule.cuts)


def parse_rule(text: str, path: str = "<rule>", line_no: int = 1) -> ThresholdRule:
    t = text.strip()
    if not t.startswith("cuts="):
        raise ParseError(path, line_no, f"expected cuts=..., got {t!r}")
    cuts = tuple(_parse_float(tok, path, line_no) for tok in t[5:].split(","))
    try:
        return ThresholdRule(cuts=cuts)
    except ValueError as exc:
        raise ParseError(path, line_no, str(exc)) from None


def write_rule(path: str, rule: ThresholdRule, manifest: RunManifest | None = None) -> None:
    lines = manifest.lines() if manifest is not None else []
    lines.append(format_rule(rule))
    write_atomic(path, "\n".join(lines) + "\n")


def read_rule(path: str) -> ThresholdRule:
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            return parse_rule(line, path, line_no)
    raise ParseError(path, 1, "no rule line found")


# -- confusion CSV -------------------------------------------------------

def write_confusion(
    path: str, cm: ConfusionMatrix, manifest: RunManifest | None = None
) -> None:
    rows = [",".join(fmt_float(v) for v in row) for row in cm.a]
    header = f"k={cm.k};provenance={cm.provenance}"
    write_atomic(path, render_table(manifest, header, rows))


def read_confusion(path: str) -> ConfusionMatrix:
    header: tuple[str, int] | None = None
    rows: list[list[float]] = []
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if header is None:
                header = (line, line_no)
                continue
            rows.append([_parse_float(t, path, line_no) for t in line.split(",")])
    if header is None:
        raise ParseError(path, 1, "missing k=...;provenance=... header")
    head, head_ln = header
    fields = dict(
        part.partition("=")[::2] for part in head.split(";") if "=" in part
    )
    if sorted(fields) != ["k", "provenance"]:
        raise ParseError(path, head_ln, f"malformed header {head!r}")
    try:
        k = int(fields["k"])
    except ValueError:
        raise ParseError(path, head_ln, f"k must be an integer, got {fields['k']!r}") from None
    if len(rows) != k or any(len(r) != k for r in rows):
        raise ParseError(path, head_ln, f"expected a {k}x{k} table")
    try:
        return ConfusionMatrix(a=np.asarray(rows), provenance=fields["provenance"])
    except ValueError as exc:
        raise ParseError(path, head_ln, str(exc)) from None


# -- sample CSV ----------------------------------------------------------

def sample_header_entries(s: LabeledSample) -> tuple[tuple[str, str], ...]:
    """Reconstruction keys carried in every sample file's manifest."""
    m = s.model
    return (
        ("K", str(m.k)),
        ("means", ",".join(fmt_float(v) for v in m.means)),
        ("sigma", fmt_float(m.sigma)),
        ("eta", ",".join(fmt_float(v) for v in m.eta.eta)),
        ("n", str(s.n)),
        ("seed", str(s.seed)),
    )


def render_sample(s: LabeledSample, manifest: RunManifest | None) -> str:
    rows = [
        f"{fmt_float(x)},{c}" for x, c in zip(s.x.tolist(), s.labels.tolist())
    ]
    return render_table(manifest, "x,class", rows)


def write_sample(path: str, s: LabeledSample, manifest: RunManifest) -> None:
    write_atomic(path, render_sample(s, manifest))


def read_sample(path: str) -> LabeledSample:
    entries: dict[str, tuple[str, int]] = {}
    xs: list[float] = []
    labels: list[int] = []
    saw_columns = False
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, sep, value = line[1:].strip().partition("=")
                if sep:
                    entries.setdefault(key.strip(), (value.strip(), line_no))
                continue
            if not saw_columns:
                if line != "x,class":
                    raise ParseError(path, line_no, f"expected x,class header, got {line!r}")
                saw_columns = True
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ParseError(path, line_no, f"expected x,class row, got {line!r}")
            xs.append(_parse_float(parts[0], path, line_no))
            try:
                labels.append(int(parts[1]))
            except ValueError:
                raise ParseError(
                    path, line_no, f"class must be an integer, got {parts[1]!r}"
                ) from None
    if not saw_columns:
        raise ParseError(path, 1, "missing x,class header")
    model = _model_from_entries(entries, path)
    if "seed" not in entries:
        raise ParseError(path, 1, "missing required key 'seed'")
    raw, ln = entries["seed"]
    try:
        seed = int(raw)
    except ValueError:
        raise ParseError(path, ln, f"seed must be an integer, got {raw!r}") from None
    if "n" in entries and entries["n"][0] != str(len(xs)):
        raise ParseError(
            path, entries["n"][1], f"n={entries['n'][0]} but file has {len(xs)} rows"
        )
    try:
        return LabeledSample(
            x=np.asarray(xs), labels=np.asarray(labels, dtype=np.int64), seed=seed, model=model
        )
    except ValueError as exc:
        raise ParseError(path, 1, str(exc)) from None
