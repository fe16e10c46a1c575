"""Command-line surface: every analysis as a reproducible file workflow.

Each subcommand writes CSV (or a rule line) prefixed with a `#`
manifest of its resolved parameters, so outputs are reproducible
byte for byte from their own headers.  `influence`, `bounds`, and
`search` additionally render a figure when `--plot PATH` is given.

Exit codes: 0 success, 1 usage error, 2 input parse or domain error,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import math
import re
import sys

import numpy as np

from ._version import __version__
from .bounds import s_inf, s_sup, verdict
from .empirical import fit_plugin_rule, ros, rus, sample
from .fileio import (
    ParseError,
    RunManifest,
    fmt_float,
    format_rule,
    parse_rule,
    read_confusion,
    read_model,
    read_sample,
    render_sample,
    render_table,
    sample_header_entries,
    write_atomic,
)
from .influence import QuadratureError, default_grid, sweep
from .metrics import GLOBAL_SCORES, scores, true_confusion
from .rules import bdr, edr
from .search import optimize_rule

__all__ = ["main"]

_SCORE_ALIASES = {"min": "min_r", "max": "max_r"}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is exit 1.

    The widened negative-number matcher lets values like `-inf` and
    range specs like `-50:50:0.5` follow a flag without being taken
    for option names.
    """

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(r"^-(\d+\.?\d*|\.\d+|inf)")

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(out: str | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        write_atomic(out, text)


def _canonical_score(name: str, k: int, parser: _Parser) -> str:
    kind = _SCORE_ALIASES.get(name.strip(), name.strip())
    if kind in GLOBAL_SCORES:
        return kind
    side, _, num = kind.partition("_")
    if side in ("recall", "precision") and num.isdigit() and 1 <= int(num) <= k:
        return kind
    valid = ", ".join(GLOBAL_SCORES + ("min", "max", "recall_i", "precision_i"))
    parser.error(f"unknown score {name!r}; valid names: {valid}")


def _parse_range(spec: str, parser: _Parser, what: str) -> np.ndarray:
    parts = spec.split(":")
    if len(parts) != 3:
        parser.error(f"{what} must be A:B:STEP, got {spec!r}")
    try:
        a, b, step = (float(p) for p in parts)
    except ValueError:
        parser.error(f"{what} must be numeric A:B:STEP, got {spec!r}")
    if not (math.isfinite(a) and math.isfinite(b) and math.isfinite(step)):
        parser.error(f"{what} endpoints and step must be finite")
    if step <= 0.0 or b < a:
        parser.error(f"{what} needs A <= B and STEP > 0")
    n = int(math.floor((b - a) / step + 1e-9)) + 1
    return a + step * np.arange(n)


def _resolve_rule(spec: str, model, parser: _Parser):
    if spec == "bdr":
        return bdr(model)
    if spec == "edr":
        return edr(model)
    if spec.startswith("cuts="):
        try:
            rule = parse_rule(spec)
        except ParseError as exc:
            parser.error(str(exc))
        if rule.k != model.k:
            parser.error(f"rule has {rule.k} classes but model has {model.k}")
        return rule
    parser.error(f"--rule must be bdr, edr, or cuts=..., got {spec!r}")


# -- subcommands ----------------------------------------------------------

def _cmd_scores(args, parser: _Parser) -> int:
    if (args.model is None) == (args.confusion is None):
        parser.error("exactly one of --model and --confusion is required")
    if args.model is not None:
        if args.rule is None:
            parser.error("--model input requires --rule (bdr|edr|cuts=...)")
        model = read_model(args.model)
        rule = _resolve_rule(args.rule, model, parser)
        cm = true_confusion(model, rule)
        params = [
            ("model", args.model),
            ("rule", args.rule),
            ("cuts", ",".join(fmt_float(c) for c in rule.cuts)),
        ]
    else:
        if args.rule is not None:
            parser.error("--rule only applies to --model input")
        cm = read_confusion(args.confusion)
        params = [("confusion", args.confusion)]
    if args.out is not None:
        params.append(("out", args.out))
    report = scores(cm)
    rows = [f"{kind},{fmt_float(report.value(kind))}" for kind in GLOBAL_SCORES]
    rows += [f"recall_{i},{fmt_float(r)}" for i, r in enumerate(report.recalls, start=1)]
    rows += [
        f"precision_{i},{fmt_float(p)}" for i, p in enumerate(report.precisions, start=1)
    ]
    manifest = RunManifest(subcommand="scores", params=tuple(params))
    _emit(args.out, render_table(manifest, "score,value", rows))
    return 0


def _cmd_influence(args, parser: _Parser) -> int:
    if args.K < 2:
        parser.error("--K must be at least 2")
    kinds = [_canonical_score(s, args.K, parser) for s in args.scores.split(",") if s]
    if not kinds:
        parser.error("--scores must name at least one score")
    if args.tol <= 0.0:
        parser.error("--tol must be positive")
    if args.grid is None:
        nodes = default_grid(args.K)
        grid_desc = "default"
    else:
        nodes = _parse_range(args.grid, parser, "--grid")
        grid_desc = args.grid
    lo, hi = (0.0, 1.0) if args.K == 2 else (-1.0 / args.K, (args.K - 1.0) / args.K)
    if nodes[0] < lo - 1e-12 or nodes[-1] > hi + 1e-12:
        parser.error(
            f"--grid nodes must lie in [{fmt_float(lo)}, {fmt_float(hi)}] for K={args.K}"
        )
    params = [
        ("K", str(args.K)),
        ("scores", ",".join(kinds)),
        ("grid", grid_desc),
        ("nodes", str(nodes.size)),
        ("tol", fmt_float(args.tol)),
    ]
    if args.plot is not None:
        params.append(("plot", args.plot))
    if args.out is not None:
        params.append(("out", args.out))
    curves = sweep(kinds, args.K, grid=nodes, tol=args.tol)
    rows = []
    for curve in curves:
        for (p, v), err in zip(curve.grid, curve.quad_errors):
            rows.append(
                f"{curve.score_kind},{curve.k},{curve.parameter_kind},"
                f"{fmt_float(p)},{fmt_float(v)},{fmt_float(err)}"
            )
    manifest = RunManifest(subcommand="influence", params=tuple(params))
    text = render_table(
        manifest, "score,K,parameter_kind,parameter,influence,quad_error", rows
    )
    if args.plot is not None:
        from .plotting import plot_influence

        plot_influence(curves, args.plot)
    _emit(args.out, text)
    return 0


def _cmd_bounds(args, parser: _Parser) -> int:
    if args.K < 2:
        parser.error("--K must be at least 2")
    ps = _parse_range(args.p_range, parser, "--p-range")
    params = [("K", str(args.K)), ("p-range", args.p_range)]
    if args.plot is not None:
        params.append(("plot", args.plot))
    if args.out is not None:
        params.append(("out", args.out))
    lo = s_inf(args.K)
    sups = np.array([s_sup(args.K, p) for p in ps])
    rows = [
        f"{args.K},{fmt_float(p)},{fmt_float(lo)},{fmt_float(hi)}"
        for p, hi in zip(ps, sups)
    ]
    manifest = RunManifest(subcommand="bounds", params=tuple(params))
    if args.plot is not None:
        from .plotting import plot_bounds

        plot_bounds(ps, np.full(ps.size, lo), sups, args.K, args.plot)
    _emit(args.out, render_table(manifest, "K,p,s_inf,s_sup", rows))
    return 0


def _cmd_verdict(args, parser: _Parser) -> int:
    if args.K < 2:
        parser.error("--K must be at least 2")
    try:
        p = float(args.p)
    except ValueError:
        parser.error(f"--p must be a number or -inf/inf, got {args.p!r}")
    if math.isnan(p):
        parser.error("--p must not be NaN")
    if math.isnan(args.value) or not 0.0 <= args.value <= 1.0:
        parser.error("--value must lie in [0, 1]")
    v = verdict(args.value, args.K, p)
    params = [
        ("K", str(args.K)),
        ("p", fmt_float(p)),
        ("value", fmt_float(args.value)),
    ]
    if args.out is not None:
        params.append(("out", args.out))
    manifest = RunManifest(subcommand="verdict", params=tuple(params))
    row = (
        f"{v.band},{args.K},{fmt_float(p)},{fmt_float(args.value)},"
        f"{fmt_float(v.s_inf)},{fmt_float(v.s_sup)}"
    )
    _emit(args.out, render_table(manifest, "band,K,p,value,s_inf,s_sup", [row]))
    return 0


def _cmd_search(args, parser: _Parser) -> int:
    model = read_model(args.model)
    kind = _canonical_score(args.score, model.k, parser)
    if args.grid_step is not None and args.grid_step <= 0.0:
        parser.error("--grid-step must be positive")
    if args.refine_tol is not None and args.refine_tol <= 0.0:
        parser.error("--refine-tol must be positive")
    result = optimize_rule(model, kind, args.grid_step, args.refine_tol)
    params = [
        ("model", args.model),
        ("score", kind),
        ("grid_step", fmt_float(result.grid_step)),
    ]
    if args.refine_tol is not None:
        params.append(("refine_tol", fmt_float(args.refine_tol)))
    if args.plot is not None:
        params.append(("plot", args.plot))
    if args.out is not None:
        params.append(("out", args.out))
    cut_cols = ",".join(f"cut_{i}" for i in range(1, model.k))
    cuts = ",".join(fmt_float(c) for c in result.rule.cuts)
    row = f"{kind},{cuts},{fmt_float(result.score_value)},{result.evaluations}"
    manifest = RunManifest(subcommand="search", params=tuple(params))
    if args.plot is not None:
        from .plotting import plot_search

        plot_search(model, result, args.plot)
    _emit(
        args.out,
        render_table(manifest, f"score,{cut_cols},score_value,evaluations", [row]),
    )
    return 0


def _cmd_sample(args, parser: _Parser) -> int:
    if args.n < 1:
        parser.error("--n must be at least 1")
    if not 0 <= args.seed < 2**64:
        parser.error("--seed must be an unsigned 64-bit integer")
    model = read_model(args.model)
    s = sample(model, args.n, args.seed)
    params = [("model", args.model)] + list(sample_header_entries(s))
    if args.out is not None:
        params.append(("out", args.out))
    manifest = RunManifest(subcommand="sample", params=tuple(params))
    _emit(args.out, render_sample(s, manifest))
    return 0


def _cmd_rebalance(args, parser: _Parser) -> int:
    s = read_sample(args.sample)
    balanced = ros(s) if args.method == "ros" else rus(s)
    params = [("sample", args.sample), ("method", args.method)]
    params += list(sample_header_entries(balanced))
    if args.out is not None:
        params.append(("out", args.out))
    manifest = RunManifest(subcommand="rebalance", params=tuple(params))
    _emit(args.out, render_sample(balanced, manifest))
    return 0


def _cmd_fit(args, parser: _Parser) -> int:
    if args.sigma_known is not None and args.sigma_known <= 0.0:
        parser.error("--sigma-known must be positive")
    s = read_sample(args.sample)
    rule = fit_plugin_rule(s, sigma_known=args.sigma_known)
    params = [("sample", args.sample)]
    if args.sigma_known is not None:
        params.append(("sigma_known", fmt_float(args.sigma_known)))
    if args.out is not None:
        params.append(("out", args.out))
    manifest = RunManifest(subcommand="fit", params=tuple(params))
    _emit(args.out, "\n".join(manifest.lines() + [format_rule(rule)]) + "\n")
    return 0


# -- wiring ---------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="imbalab", description=__doc__)
    parser.add_argument("--version", action="version", version=f"imbalab {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p = sub.add_parser("scores", help="score a rule on a model, or a confusion matrix")
    p.add_argument("--model")
    p.add_argument("--rule", help="bdr, edr, or cuts=...")
    p.add_argument("--confusion")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_scores)

    p = sub.add_parser("influence", help="imbalance influence sweep")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--scores", required=True, help="comma-separated score names")
    p.add_argument("--grid", help="A:B:STEP over eta_1 (K=2) or epsilon (K>2)")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--plot", help="also render a figure to this path")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_influence)

    p = sub.add_parser("bounds", help="competitiveness bounds over p")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--p-range", default="-50:50:0.5", help="A:B:STEP")
    p.add_argument("--plot", help="also render a figure to this path")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("verdict", help="three-band verdict for a score value")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--p", required=True, help="Holder exponent; -inf/inf allowed")
    p.add_argument("--value", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_verdict)

    p = sub.add_parser("search", help="score-optimal threshold rule")
    p.add_argument("--model", required=True)
    p.add_argument("--score", required=True)
    p.add_argument("--grid-step", type=float)
    p.add_argument("--refine-tol", type=float)
    p.add_argument("--plot", help="also render a figure to this path")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("sample", help="draw a seeded sample from a model")
    p.add_argument("--model", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("rebalance", help="oversample or undersample to balance")
    p.add_argument("--sample", required=True)
    p.add_argument("--method", choices=("ros", "rus"), required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_rebalance)

    p = sub.add_parser("fit", help="plug-in Bayes rule from a sample file")
    p.add_argument("--sample", required=True)
    p.add_argument("--sigma-known", type=float)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_fit)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except ParseError as exc:
        print(f"imbalab: {exc}", file=sys.stderr)
        return 2
    except QuadratureError as exc:
        print(f"imbalab: numeric failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"imbalab: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"imbalab: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"imbalab: numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
