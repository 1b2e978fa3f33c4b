"""Command-line front end: every computation as a reproducible command.

Commands emit CSV or JSON tables (plot data, not plots). Output is a pure
function of flags and seed: the default seed is fixed and printed in every
header, floats are written with 17 significant digits, and per-row wall
times in rate reports are zeroed on emission, so identical invocations are
byte-identical.

Exit codes: 0 success / assertions hold, 1 assertion failure, 2 usage,
3 data error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .dst import (
    CorpusFormatError,
    InsufficientBitsError,
    build,
    knuth_corpus,
    load_corpus,
)
from .lifetimes import GeometricDst, GrowthRate, ScaledBase
from .limit_law import q_cdf, q_pmf, q_tail
from .metrics import (
    REPORT_COLUMNS,
    DistanceReport,
    RateRow,
    check_rate_report,
    limit_pmf_window,
    rate_report,
    tv_distance,
    tv_vs_limit,
    MAX_TV_N,
)
from .pmf import IntPmf
from .renewal import (
    MAX_EXACT_KS_N,
    RenewalConfig,
    centered_count_distribution,
    floor_log2,
    frac_log2,
    sample_scaled_limit,
    simulate_count,
)
from .rng import DEFAULT_SEED, stream_rng

_GRID_DEFAULTS = {
    "limit-law": "-3:12:1",
    "simulate": "16:65536:x4",
    "converge-tv": "16:262144:x4",
    "converge-ks": "4:18:1",
}


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


def _parse_grid(text: str) -> list[int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be A:B:STEP or A:B:xM, got {text!r}")
    try:
        a, b = int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"grid endpoints must be integers: {text!r}")
    if a > b:
        raise UsageError(f"reversed grid: {text!r}")
    step = parts[2]
    if step.startswith("x"):
        try:
            m = int(step[1:])
        except ValueError:
            raise UsageError(f"bad grid multiplier: {text!r}")
        if m < 2:
            raise UsageError("grid multiplier must be >= 2")
        if a < 1:
            raise UsageError("geometric grid needs a positive start")
        vals, v = [], a
        while v <= b:
            vals.append(v)
            v *= m
        return vals
    try:
        s = int(step)
    except ValueError:
        raise UsageError(f"bad grid step: {text!r}")
    if s < 1:
        raise UsageError("grid step must be >= 1")
    return list(range(a, b + 1, s))


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    f = float(v)
    return str(int(f)) if f.is_integer() else format(f, ".17g")


def _emit(meta: dict, columns, rows, fmt: str, out, extra: dict | None = None):
    if fmt == "csv":
        lines = ["# " + " ".join(f"{k}={v}" for k, v in meta.items()),
                 ",".join(columns)]
        lines += [",".join(_cell(v) for v in row) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        obj = {"meta": meta, "rows": [dict(zip(columns, row)) for row in rows]}
        if extra:
            obj.update(extra)
        text = json.dumps(obj, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _check_eta(eta: float) -> float:
    if not 0.0 <= eta <= 1.0:
        raise UsageError(f"--eta must lie in [0, 1], got {eta!r}")
    return eta


def cmd_limit_law(args) -> int:
    eta = _check_eta(args.eta)
    xs = _parse_grid(args.n_grid or _GRID_DEFAULTS["limit-law"])
    meta = {"command": "limit-law", "version": __version__,
            "seed": args.seed, "eta": _cell(eta),
            "grid": args.n_grid or _GRID_DEFAULTS["limit-law"]}
    rows = [(x, q_cdf(eta, x), q_pmf(eta, x), q_tail(eta, x)) for x in xs]
    _emit(meta, ("x", "cdf", "pmf", "tail"), rows, args.format, args.out)
    return 0


def cmd_depth_dist(args) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    if not 1 <= args.n <= MAX_TV_N:
        raise UsageError(f"--n must be in [1, {MAX_TV_N}] for the exact DP")
    law, eta = centered_count_distribution(args.n)
    lo, qmasses, _ = limit_pmf_window(eta, min(law.support_min, -8),
                                      max(law.support_max, 10))
    tv, _ = tv_vs_limit(law, eta)
    rows = []
    for i, qm in enumerate(qmasses):
        j = lo + i
        ex = law.prob(j)
        rows.append((j, ex, float(qm), abs(ex - float(qm))))
    meta = {"command": "depth-dist", "version": __version__,
            "seed": args.seed, "n": args.n, "eta": _cell(eta)}
    if args.format == "csv":
        rows.append(("tv", None, None, tv))
        _emit(meta, ("j", "exact_pmf", "q_pmf", "abs_diff"), rows,
              args.format, args.out)
    else:
        _emit(meta, ("j", "exact_pmf", "q_pmf", "abs_diff"), rows,
              args.format, args.out, extra={"tv": tv})
    return 0


def cmd_dst_demo(args) -> int:
    if args.corpus:
        try:
            corpus = load_corpus(args.corpus)
        except CorpusFormatError as err:
            raise UsageError(f"corpus {args.corpus}: {err}")
        except OSError as err:
            raise UsageError(f"cannot read corpus: {err}")
    else:
        corpus = knuth_corpus()
    try:
        tree, reports = build(corpus)
    except InsufficientBitsError as err:
        raise DataError(f"insufficient bits for key {err.label!r} "
                        f"(entry {err.index})")
    rows = [(r.label, r.depth, r.parent or "", r.side) for r in reports]
    if args.probe is not None:
        if not args.probe or any(c not in "01" for c in args.probe):
            raise UsageError(f"--probe must be a nonempty bit string, "
                             f"got {args.probe!r}")
        try:
            pr = tree.probe(args.probe, label="probe")
        except InsufficientBitsError:
            raise DataError(f"probe {args.probe} exhausted its bits")
        rows.append(("probe:" + args.probe, pr.depth, pr.parent or "",
                     pr.side))
    meta = {"command": "dst-demo", "version": __version__,
            "seed": args.seed,
            "corpus": args.corpus or "builtin"}
    _emit(meta, ("label", "depth", "parent", "side"), rows, args.format,
          args.out)
    return 0


def cmd_simulate(args) -> int:
    if not args.alpha > 1.0:
        raise UsageError(f"--alpha must exceed 1, got {args.alpha!r}")
    if args.samples < 1:
        raise UsageError(f"--samples must be >= 1, got {args.samples}")
    grid = _parse_grid(args.n_grid or _GRID_DEFAULTS["simulate"])
    dyadic = args.alpha == 2.0
    family = (GeometricDst() if dyadic
              else ScaledBase(GrowthRate(args.alpha)))
    rows = []
    for i, t in enumerate(grid):
        counts = simulate_count(
            RenewalConfig(family, float(t), args.samples, args.seed,
                          stream=2 * i))
        if dyadic:
            k, eta = floor_log2(t), frac_log2(t)
        else:
            x = math.log(t) / math.log(args.alpha)
            k = math.floor(x)
            eta = x - k
        emp = IntPmf.from_samples(counts - k)
        if dyadic:
            value, trunc = tv_vs_limit(emp, eta)
        else:
            ref_rng = stream_rng(args.seed, 2 * i + 1)
            limits = sample_scaled_limit(family, ref_rng, size=args.samples)
            ref = IntPmf.from_samples(np.floor(
                -np.log(limits) / math.log(args.alpha) + eta).astype(np.int64))
            value, trunc = tv_distance(emp, ref), 0.0
        rows.append(RateRow(t, eta, "sim_tv", value, trunc, 0.0))
    meta = {"command": "simulate", "version": __version__,
            "seed": args.seed, "alpha": _cell(args.alpha),
            "samples": args.samples,
            "grid": args.n_grid or _GRID_DEFAULTS["simulate"]}
    report = DistanceReport(tuple(rows))
    _emit(meta, REPORT_COLUMNS,
          [(r.n, r.eta, r.kind, r.value, r.trunc_bound, r.ms)
           for r in report.rows], args.format, args.out)
    return 0


def cmd_converge(args) -> int:
    kind = {"tv": "tv_limit", "ks": "ks_scaled"}[args.kind]
    default = _GRID_DEFAULTS["converge-tv" if kind == "tv_limit"
                             else "converge-ks"]
    grid = _parse_grid(args.n_grid or default)
    if kind == "tv_limit" and grid[-1] > MAX_TV_N:
        raise UsageError(f"tv grid limited to n <= {MAX_TV_N}")
    if kind == "ks_scaled" and grid[-1] > MAX_EXACT_KS_N:
        raise UsageError(f"ks grid limited to n <= {MAX_EXACT_KS_N}")
    if grid[0] < 1:
        raise UsageError("grid must start at n >= 1")
    report = rate_report(grid, kind).zero_ms()
    meta = {"command": "converge", "version": __version__,
            "seed": args.seed, "kind": args.kind,
            "grid": args.n_grid or default}
    _emit(meta, REPORT_COLUMNS,
          [(r.n, r.eta, r.kind, r.value, r.trunc_bound, r.ms)
           for r in report.rows], args.format, args.out)
    problems = check_rate_report(report)
    for p in problems:
        print(f"rate check failed: {p}", file=sys.stderr)
    return 1 if problems else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="renewal-dst",
        description="Limit laws of renewal counts under exponentially "
                    "increasing lifetimes, with the digital-search-tree "
                    "depth chain as the exact engine.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                       help="64-bit stream seed (default %(default)s)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("limit-law",
                       help="CDF/pmf/tail table of the limit family")
    p.add_argument("--eta", type=float, default=0.0)
    p.add_argument("--n-grid", default=None, metavar="A:B:STEP",
                   help="x range (default %s)" % _GRID_DEFAULTS["limit-law"])
    common(p)
    p.set_defaults(func=cmd_limit_law)

    p = sub.add_parser("depth-dist",
                       help="exact centered count law next to its limit")
    p.add_argument("--n", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_depth_dist)

    p = sub.add_parser("dst-demo",
                       help="insertion report for a bit corpus")
    p.add_argument("--corpus", default=None,
                   help="path to 'label bits' records (default: builtin)")
    p.add_argument("--probe", default=None, metavar="BITS",
                   help="append a non-mutating probe of this direction")
    common(p)
    p.set_defaults(func=cmd_dst_demo)

    p = sub.add_parser("simulate",
                       help="Monte Carlo centered counts vs the limit family")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--n-grid", default=None, metavar="A:B:STEP",
                   help="horizon grid (default %s)" % _GRID_DEFAULTS["simulate"])
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("converge",
                       help="exact convergence-rate report with checks")
    p.add_argument("--kind", choices=("tv", "ks"), default="tv")
    p.add_argument("--n-grid", default=None, metavar="A:B:STEP")
    common(p)
    p.set_defaults(func=cmd_converge)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.func(args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except DataError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
