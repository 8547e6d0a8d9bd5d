"""Command-line front end.

Exit codes: 0 success, 1 a certification or property check failed, 2 bad usage or input.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from typing import Sequence

from . import experiments as ex
from .chain import make_chain
from .constants import LAMBDA, RHO
from .delaunay import triangulate
from .errors import GeometryError
from .io import FormatError, read_chain, read_points
from .stretch import stretch_factor
from .verifier import INTERVALS, VerifierConfig, certify

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

RANDOM_COLUMNS = ("seed", "n", "trial", "stretch", "witness_i", "witness_j")
CSV_HELP = f"""\
CSV output of `random`: columns {",".join(RANDOM_COLUMNS)} (plus runtime_ms with --timing),
one row per trial in trial order, then a summary row whose trial field is "max" and whose
stretch is the largest observed value. Floats carry 17 significant digits.

Parallelism: STRETCH_THREADS=k runs trials in k worker processes (0 = one per CPU, unset = 1).
Output does not depend on the worker count.
"""


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _json_default(x):
    raise TypeError(f"not serializable: {type(x).__name__}")


def _clean(obj):
    """Replace non-finite floats by strings so the JSON stays standard."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def emit_json(obj, out) -> None:
    json.dump(_clean(obj), out, indent=2, sort_keys=False, default=_json_default)
    out.write("\n")


def emit_csv(header: Sequence[str], rows, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


def _want_csv(args, default: str) -> bool:
    return args.format == "csv" if args.format else default == "csv"


def _workers() -> int:
    try:
        return ex.worker_count()
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- commands ----------------------------------------------------------------

def cmd_stretch(args, out) -> int:
    if not args.input:
        raise UsageError("stretch needs --input PATH")
    try:
        pts = read_points(args.input)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    if len(pts) < 3:
        raise UsageError(f"need at least 3 points, got {len(pts)}")
    try:
        rep = stretch_factor(triangulate(pts, seed=args.seed))
    except GeometryError as exc:
        raise UsageError(str(exc)) from None
    if _want_csv(args, "json"):
        emit_csv(("n", "stretch", "witness_i", "witness_j"), [(rep.n, rep.stretch, *rep.witness)], out)
    else:
        emit_json(rep.to_json(), out)
    return EXIT_OK


def cmd_random(args, out) -> int:
    if args.n < 3 or args.trials < 1:
        raise UsageError("random needs --n >= 3 and --trials >= 1")
    recs = ex.run_random(args.n, args.trials, args.seed, _workers())
    top = max(recs, key=lambda r: r.stretch)
    failed = any(not 1.0 <= r.stretch < RHO for r in recs)
    if _want_csv(args, "csv"):
        header = RANDOM_COLUMNS + (("runtime_ms",) if args.timing else ())
        rows = []
        for r in recs:
            row = [r.seed, r.n, r.trial, r.stretch, *r.witness]
            rows.append(row + [r.runtime_ms] if args.timing else row)
        summary = [args.seed, args.n, "max", top.stretch, *top.witness]
        rows.append(summary + [sum(r.runtime_ms for r in recs)] if args.timing else summary)
        emit_csv(header, rows, out)
    else:
        records = []
        for r in recs:
            d = {"seed": r.seed, "n": r.n, "trial": r.trial, "stretch": r.stretch, "witness": list(r.witness)}
            if args.timing:
                d["runtime_ms"] = r.runtime_ms
            records.append(d)
        emit_json({"records": records, "max_stretch": top.stretch, "max_witness": list(top.witness),
                   "max_trial": top.trial, "pass": not failed}, out)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_certify(args, out) -> int:
    try:
        cfg = VerifierConfig(lam=args.lam, guard=args.guard)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep = certify(cfg)
    if _want_csv(args, "json"):
        emit_csv(("i", "lo", "hi", "apex", "status", "evals"),
                 [(i, *INTERVALS[i], r.apex, r.status, r.evaluations) for i, r in sorted(rep.results.items())],
                 out)
    else:
        emit_json(rep.to_json(), out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def _chain_file_report(args, out) -> int:
    try:
        circles, term = read_chain(args.input)
        chain = make_chain(circles)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    except GeometryError as exc:
        raise UsageError(f"invalid chain: {exc}") from None
    rng = ex.trial_rng(args.seed, 0)
    try:
        terms = [term] if term is not None else ex.sample_terminals(chain, rng, args.pairs)
        res = ex.check_chain(chain, terms, samples_per_arc=args.samples)
    except GeometryError as exc:
        raise UsageError(f"invalid terminals: {exc}") from None
    report = {
        "n": chain.n, "pairs": res.pairs, "unobstructed_pairs": res.unobstructed,
        "max_upsilon": res.max_upsilon, "max_ratio": res.max_ratio,
        "max_stretch_estimate": res.stretch_estimate, "violations": res.violations,
        "total_violations": sum(res.violations.values()),
    }
    if term is not None:
        report["terminals"] = {"u": list(term.u), "v": list(term.v)}
        report["upsilon"] = res.max_upsilon
    _emit_summary(args, report, out)
    return EXIT_FAIL if report["total_violations"] else EXIT_OK


def _emit_summary(args, report: dict, out) -> None:
    if _want_csv(args, "json"):
        flat = []
        for k, v in report.items():
            if isinstance(v, dict):
                flat.extend((f"{k}.{kk}", vv) for kk, vv in v.items())
            else:
                flat.append((k, v))
        emit_csv(("key", "value"), flat, out)
    else:
        emit_json(report, out)


def cmd_chain_suite(args, out) -> int:
    if args.pairs < 1 or args.samples < 0 or 0 < args.samples < 8:
        raise UsageError("chain-suite needs --pairs >= 1 and --samples 0 or >= 8")
    if args.input:
        return _chain_file_report(args, out)
    if args.count < 1 or args.max_n < 2:
        raise UsageError("chain-suite needs --count >= 1 and --max-n >= 2")
    summary = ex.run_chain_suite(args.count, args.max_n, args.seed, args.pairs, args.samples, _workers())
    _emit_summary(args, summary.to_json(), out)
    return EXIT_FAIL if summary.total_violations else EXIT_OK


def cmd_lowerbound(args, out) -> int:
    if args.n < 8:
        raise UsageError("lowerbound needs --n >= 8")
    rep = ex.lowerbound(args.n)
    if _want_csv(args, "json"):
        emit_csv(("n", "stretch", "witness_i", "witness_j"), [(rep.n, rep.stretch, *rep.witness)], out)
    else:
        emit_json(rep.to_json(), out)
    return EXIT_OK if 1.0 <= rep.stretch < RHO else EXIT_FAIL


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    fmt_parent = argparse.ArgumentParser(add_help=False)
    g = fmt_parent.add_mutually_exclusive_group()
    g.add_argument("--json", dest="format", action="store_const", const="json", help="JSON output")
    g.add_argument("--csv", dest="format", action="store_const", const="csv", help="CSV output")
    fmt_parent.add_argument("--seed", type=int, default=0, help="random seed (default 0)")

    p = argparse.ArgumentParser(prog="chainstretch", description="Delaunay stretch-factor experiments and "
                                "certification of the chain-of-circles inequalities.",
                                epilog=CSV_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    s = sub.add_parser("stretch", parents=[fmt_parent], help="stretch factor of a point file's Delaunay triangulation")
    s.add_argument("--input", metavar="PATH", help='point file, one "x,y" per line, # comments')
    s.set_defaults(func=cmd_stretch)

    s = sub.add_parser("random", parents=[fmt_parent], help="stretch factors of seeded random point sets",
                       epilog=CSV_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    s.add_argument("--n", type=int, default=50, help="points per instance (default 50)")
    s.add_argument("--trials", type=int, default=200, help="number of instances (default 200)")
    s.add_argument("--timing", action="store_true", help="add a runtime_ms column (breaks byte-identical output)")
    s.set_defaults(func=cmd_random)

    s = sub.add_parser("certify", parents=[fmt_parent], help="Lipschitz certification of g1..g4 < 0")
    s.add_argument("--lambda", dest="lam", type=float, default=LAMBDA, help=f"lambda (default {LAMBDA})")
    s.add_argument("--guard", type=float, default=-1e-6, help="certification threshold (default -1e-6)")
    s.set_defaults(func=cmd_certify)

    s = sub.add_parser("chain-suite", parents=[fmt_parent], help="property checks on random chains of circles")
    s.add_argument("--count", type=int, default=1000, help="number of chains (default 1000)")
    s.add_argument("--max-n", type=int, default=6, help="largest chain length (default 6)")
    s.add_argument("--pairs", type=int, default=64, help="terminal pairs per chain (default 64)")
    s.add_argument("--samples", type=int, default=8,
                   help="grid samples per arc for the chain-stretch estimate; 0 disables it (default 8)")
    s.add_argument("--input", metavar="PATH",
                   help='evaluate one chain file ("cx,cy,r" lines, optional "u:x,y v:x,y" line)')
    s.set_defaults(func=cmd_chain_suite)

    s = sub.add_parser("lowerbound", parents=[fmt_parent], help="stretch of the squashed-circle construction")
    s.add_argument("--n", type=int, default=64, help="number of points, at least 8 (default 64)")
    s.set_defaults(func=cmd_lowerbound)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args, out)
    except (UsageError, FormatError) as exc:
        print(f"chainstretch {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
