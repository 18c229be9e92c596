"""Command-line front end: ``nonor4 analyze | ribbon | batch | selftest``."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence, TextIO

from . import __version__
from .casson_gordon import cg_signatures, ribbon_bound
from .knot_model import BUILTINS, Seifert, TwoBridge, invariants, parse
from .obstruction_engine import h_lower_bound
from .report import ReportDocument


class UsageError(Exception):
    pass


def analyze_expr(expr: str, negdef_dinv: bool = False) -> ReportDocument:
    knot = parse(expr)
    rep = h_lower_bound(knot, use_negdef_dinv=negdef_dinv)
    return ReportDocument(expr, knot, rep.invariants, rep)


def ribbon_expr(expr: str, n: int) -> ReportDocument:
    knot = parse(expr)
    if isinstance(knot, TwoBridge):
        alpha, beta = knot.alpha, knot.beta
    elif isinstance(knot, Seifert) and knot.lens is not None:
        alpha, beta = knot.lens
    else:
        raise UsageError("ribbon needs a single 2-bridge knot, e.g. 2br(25,2)")
    rep = h_lower_bound(knot)
    return ReportDocument(expr, knot, rep.invariants, rep, ribbon_bound(alpha, beta, n))


def _emit(doc: ReportDocument, fmt: str, out: TextIO) -> None:
    out.write((doc.to_json() if fmt == "json" else doc.to_text()) + "\n")


def read_batch(path: str) -> list[tuple[int, str]]:
    """Numbered knot lines of a batch file; '# ' lines and blank lines are skipped."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    out = []
    for i, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("# "):
            continue
        out.append((i, line))
    return out


def run_batch(entries: Sequence[tuple[int, str]], negdef_dinv: bool = False,
              jobs: int | None = None) -> list[tuple[int, str, ReportDocument | str]]:
    def one(entry):
        lineno, expr = entry
        try:
            return lineno, expr, analyze_expr(expr, negdef_dinv)
        except (ValueError, ArithmeticError, RuntimeError) as e:
            return lineno, expr, str(e)

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(one, entries))


def selftest(out: TextIO) -> bool:
    """Calibration and anchor checks; prints one line per check."""
    checks = []

    def check(name, ok, got):
        checks.append(ok)
        out.write(f"{'PASS' if ok else 'FAIL'} {name}: {got}\n")

    for name in ("3_1", "4_1", "5_1", "5_2"):
        inv = invariants(BUILTINS[name])
        check(f"built-in {name}", True, f"D={inv.D} signature={inv.signature} arf={inv.arf}")
    r = h_lower_bound(parse("4_1 # 5_1"))
    check("h(4_1 # 5_1) >= 3", r.h_lower_bound == 3, r.h_lower_bound)
    r = h_lower_bound(parse("4_1"))
    check("h(4_1) >= 2", r.h_lower_bound == 2, r.h_lower_bound)
    r = h_lower_bound(parse("3_1 # 3_1 # mirror(5_2)"))
    ok = (r.klein["posdef"].fired and r.klein["indef"].fired and not r.klein["negdef"].fired)
    check("3_1 # 3_1 # mirror(5_2) Klein verdicts", ok,
          {k: str(r.klein[k].verdict) for k in ("posdef", "negdef", "indef")})
    for a, b, p, want in ((25, 2, 5, (5, 3)), (169, 2, 13, (83, 23))):
        cg = cg_signatures(a, b, p)
        got = (cg.sigma_max, cg.sigma_min)
        check(f"cg_signatures({a},{b},{p}) = {want}", got == want,
              f"({got[0]}, {got[1]}) residual {cg.residual:.1e}")
    return all(checks)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nonor4",
                                 description="Lower bounds on the nonorientable 4-genus of knots.")
    ap.add_argument("--version", action="version", version=f"nonor4 {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="obstructions and h lower bound for one knot")
    a.add_argument("expr")
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.add_argument("--negdef-dinv", action="store_true",
                   help="also run the d-invariant negative definite test (lens-space sums)")

    r = sub.add_parser("ribbon", help="Casson-Gordon ribbon genus bound for n copies")
    r.add_argument("--knot", required=True)
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--format", choices=("text", "json"), default="text")

    b = sub.add_parser("batch", help="analyze one knot per line of a file")
    b.add_argument("file")
    b.add_argument("--format", choices=("text", "json"), default="text")
    b.add_argument("--negdef-dinv", action="store_true")
    b.add_argument("--jobs", type=int, default=None)

    sub.add_parser("selftest", help="run calibration and anchor checks")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out, err = sys.stdout, sys.stderr
    try:
        if args.command == "analyze":
            _emit(analyze_expr(args.expr, args.negdef_dinv), args.format, out)
        elif args.command == "ribbon":
            if args.n < 0:
                raise UsageError("--n must be nonnegative")
            _emit(ribbon_expr(args.knot, args.n), args.format, out)
        elif args.command == "batch":
            try:
                entries = read_batch(args.file)
            except OSError as e:
                err.write(f"error: cannot read {args.file}: {e.strerror}\n")
                return 2
            results = run_batch(entries, args.negdef_dinv, args.jobs)
            n_ok = sum(1 for *_, r in results if isinstance(r, ReportDocument))
            n_err = len(results) - n_ok
            if args.format == "json":
                doc = {
                    "reports": [{"line": i, **r.to_dict()} for i, _, r in results
                                if isinstance(r, ReportDocument)],
                    "errors": [{"line": i, "input": e, "error": r} for i, e, r in results
                               if not isinstance(r, ReportDocument)],
                    "summary": {"lines": len(results), "ok": n_ok, "errors": n_err},
                }
                out.write(json.dumps(doc, indent=2) + "\n")
            else:
                for i, expr, r in results:
                    if isinstance(r, ReportDocument):
                        out.write(f"line {i}: {expr} -> h >= {r.obstruction.h_lower_bound}\n")
                    else:
                        out.write(f"line {i}: {expr} -> error: {r}\n")
                out.write(f"summary: {len(results)} lines, {n_ok} ok, {n_err} errors\n")
        elif args.command == "selftest":
            return 0 if selftest(out) else 1
    except UsageError as e:
        err.write(f"error: {e}\n")
        return 2
    except (ValueError, ArithmeticError, RuntimeError) as e:
        err.write(f"error: {e}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
