"""Command-line surface: every pipeline behind one `zaremba` entry point.

Standard output carries data only (JSON or CSV, deterministic ordering,
floats at 12 significant digits); progress notes go to standard error.
Optional --figure renders the matching matplotlib report next to the data.
Exit codes: 0 success, 1 usage, 2 domain error, 3 resource or overflow.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from fractions import Fraction
from typing import Optional

from .arith import singular_series
from .cf_core import Alphabet
from .circle import MajorArcConfig, decompose
from .construction import build_schedule
from .dimension import dimension as compute_dimension
from .errors import DomainError, ResourceError
from .modular import find_bad_modulus, is_admissible
from .orbit import (DET_ALL, DET_PLUS_ONE, denominators, density_report,
                    enumerate_ball)
from .primroot import search_height_bounded

SCHEMA_VERSION = "zl-1"

_PROGRESSION = re.compile(r"^(\d+)\+(\d+)k,(\d+)$")
_RANGE = re.compile(r"^(\d+)\.\.(\d+)$")


def parse_alphabet(spec: str) -> Alphabet:
    """Alphabet syntax: "1,2,5" list, "1..5" range, "1+8k,6" progression of 6 terms."""
    m = _PROGRESSION.match(spec)
    if m:
        start, step, count = (int(g) for g in m.groups())
        if count < 1 or step < 1:
            raise DomainError(f"bad progression {spec!r}")
        return Alphabet(tuple(start + step * i for i in range(count)))
    m = _RANGE.match(spec)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        if hi < lo:
            raise DomainError(f"bad range {spec!r}")
        return Alphabet(tuple(range(lo, hi + 1)))
    try:
        return Alphabet(tuple(int(tok) for tok in spec.split(",") if tok))
    except ValueError as exc:
        raise DomainError(f"cannot parse alphabet {spec!r}") from exc


def fmt(x) -> float:
    """Floats rounded to 12 significant digits for byte-stable output."""
    return float(f"{float(x):.12g}")


def _progress(message: str) -> None:
    print(message, file=sys.stderr)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(args, payload: dict, rows: Optional[tuple[list[str], list[tuple]]]) -> None:
    if args.format == "json" or rows is None:
        text = json.dumps(payload, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header, data = rows
        writer.writerow(header)
        writer.writerows(data)
        text = buf.getvalue()
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("ZL_THREADS")
    return int(env) if env else 1


def _cmd_enumerate(args) -> None:
    alphabet = parse_alphabet(args.alphabet)
    ball = enumerate_ball(alphabet, args.norm, args.det, _threads(args))
    index = denominators(ball)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "enumerate",
        "alphabet": list(alphabet.members),
        "norm_bound": args.norm,
        "det_filter": args.det,
        "count": len(ball),
        "distinct_denominators": len(index),
        "max_denominator": max(index.keys_sorted()) if len(index) else None,
    }
    if not args.no_table:
        payload["multiplicities"] = [[d, c] for d, c in index.rows()]
    rows = (["denominator", "multiplicity"], index.rows())
    _emit(args, payload, rows)
    if args.figure:
        from .figures import multiplicity_figure
        multiplicity_figure(index, f"ball {args.norm}, alphabet {alphabet}", args.figure)


def _cmd_density(args) -> None:
    alphabet = parse_alphabet(args.alphabet)
    report = density_report(alphabet, args.norm, args.qmax, args.grid, _threads(args))
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "density",
        "alphabet": list(alphabet.members),
        "norm_bound": args.norm,
        "q_max": args.qmax,
        "rows": [
            {"cutoff": n, "admissible": a, "realized": r, "fraction": fmt(f)}
            for n, a, r, f in report.rows()
        ],
    }
    rows = (["cutoff", "admissible", "realized", "fraction"],
            [(n, a, r, f"{f:.12g}") for n, a, r, f in report.rows()])
    _emit(args, payload, rows)
    if args.figure:
        from .figures import density_figure
        density_figure(report, args.figure)


def _cmd_admissible(args) -> None:
    alphabet = parse_alphabet(args.alphabet)
    cert = is_admissible(args.d, alphabet, args.qmax)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "admissible",
        "alphabet": list(alphabet.members),
        "d": args.d,
        "q_max": args.qmax,
        "admissible": cert.admissible,
        "checked_moduli": cert.checked_moduli,
        "witness": list(cert.witness) if cert.witness else None,
    }
    _emit(args, payload, None)


def _cmd_obstructions(args) -> None:
    alphabet = parse_alphabet(args.alphabet)
    report = find_bad_modulus(alphabet, args.qmax)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "obstructions",
        "alphabet": list(alphabet.members),
        "q_max": args.qmax,
        "k_star": report.k_star,
        "residue_class": list(report.residue_class) if report.residue_class else None,
        "mode": report.mode,
        "failing_moduli": report.failing_moduli,
        "inadmissible_residues": {str(q): miss
                                  for q, miss in sorted(report.inadmissible_residues.items())},
    }
    _emit(args, payload, None)


def _cmd_dimension(args) -> None:
    alphabet = parse_alphabet(args.alphabet)
    est = compute_dimension(alphabet, args.tol)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "dimension",
        "alphabet": list(alphabet.members),
        "delta": fmt(est.delta),
        "collocation_order": est.collocation_order,
        "residual": fmt(est.residual),
        "converged": est.converged,
    }
    _emit(args, payload, None)


def _cmd_series(args) -> None:
    alphabet = parse_alphabet(args.alphabet)
    value = singular_series(args.n, alphabet, args.mode, args.level)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "series",
        "alphabet": list(alphabet.members),
        "n": args.n,
        "mode": args.mode,
        "level": args.level,
        "value": fmt(value.value),
        "exact": [value.exact.numerator, value.exact.denominator],
        "k_star": value.k_star,
        "bad_primes": value.bad_primes,
    }
    rows = (["q", "term_numerator", "term_denominator", "term"],
            [(q, t.numerator, t.denominator, f"{float(t):.12g}")
             for q, t in sorted(value.terms.items())])
    _emit(args, payload, rows)
    if args.figure:
        from .figures import series_figure
        series_figure(value, args.figure)


def _cmd_circle(args) -> None:
    alphabet = parse_alphabet(args.alphabet)
    _progress(f"enumerating det +1 ball at {args.norm} ...")
    ball = enumerate_ball(alphabet, args.norm, DET_PLUS_ONE, _threads(args))
    config = MajorArcConfig(args.norm, args.qlevel, alphabet, args.shift)
    lo, hi = args.window if args.window else (args.norm // 40, args.norm // 25)
    result = decompose(ball, (lo, hi), config)
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "circle",
        "alphabet": list(alphabet.members),
        "norm_bound": args.norm,
        "q_level": args.qlevel,
        "shift": args.shift,
        "window": [lo, hi],
        "index_set_size": result.index_set_size,
        "l2_error": fmt(result.l2_error),
        "normalized_l2": fmt(result.normalized_l2),
        "exceptional": result.exceptional,
        "rows": [
            {"d": d, "R": r, "M": fmt(m), "E": fmt(e), "exceptional": bool(x)}
            for d, r, m, e, x in result.rows()
        ],
    }
    rows = (["d", "R", "M", "E", "exceptional"],
            [(d, r, f"{m:.12g}", f"{e:.12g}", x) for d, r, m, e, x in result.rows()])
    _emit(args, payload, rows)
    if args.figure:
        from .figures import decomposition_figure
        decomposition_figure(result, args.figure)


def _cmd_primroots(args) -> None:
    records = search_height_bounded(args.pmax, args.height, args.mod4,
                                    args.min_factor)
    found = [r for r in records if r.found]
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "primroots",
        "p_max": args.pmax,
        "height_bound": args.height,
        "residue_3_mod_4": args.mod4,
        "primes_scanned": len(records),
        "primes_with_root": len(found),
        "misses": [r.p for r in records if not r.found],
        "rows": [{"p": r.p, "b": r.b, "height": r.height} for r in found],
    }
    rows = (["p", "b", "height"], [(r.p, r.b, r.height) for r in found])
    _emit(args, payload, rows)
    if args.figure:
        from .figures import primroot_figure
        primroot_figure(records, args.figure)


def _cmd_schedule(args) -> None:
    schedule = build_schedule(args.bound, Fraction(args.r), args.cr)
    checks = schedule.check_identities()
    payload = {
        "schema": SCHEMA_VERSION,
        "command": "schedule",
        "N": fmt(schedule.N),
        "r": [schedule.r.numerator, schedule.r.denominator],
        "C_r": fmt(schedule.C_r),
        "J1": schedule.J1,
        "J2": schedule.J2,
        "J2_formula": schedule.J2_formula,
        "J": schedule.J,
        "identities": {name: bool(ok) for name, ok in sorted(checks.items())},
        "exponents": [
            {"j": j,
             "numerator": schedule.exponents[j].numerator,
             "denominator": schedule.exponents[j].denominator,
             "level": fmt(schedule.level(j))}
            for j in schedule.indices()
        ],
    }
    rows = (["j", "numerator", "denominator", "level"],
            [(j, schedule.exponents[j].numerator, schedule.exponents[j].denominator,
              f"{schedule.level(j):.12g}") for j in schedule.indices()])
    _emit(args, payload, rows)
    if args.figure:
        from .figures import schedule_figure
        schedule_figure(schedule, args.figure)


def build_parser() -> _Parser:
    parser = _Parser(prog="zaremba", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, alphabet=True):
        if alphabet:
            p.add_argument("--alphabet", required=True,
                           help='members: "1,2,5", range: "1..5", progression: "1+8k,6"')
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--output", help="write data here instead of stdout")
        p.add_argument("--figure", help="also render a matplotlib figure to this path")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: ZL_THREADS or 1)")

    p = sub.add_parser("enumerate", help="norm-ball enumeration and multiplicities",
                       epilog="CSV columns: denominator, multiplicity")
    common(p)
    p.add_argument("--norm", type=int, required=True)
    p.add_argument("--det", choices=[DET_ALL, DET_PLUS_ONE], default=DET_ALL)
    p.add_argument("--no-table", action="store_true",
                   help="omit the multiplicity table from JSON output")
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("density",
                       help="realized-denominator density among admissible integers",
                       epilog="CSV columns: cutoff, admissible, realized, fraction")
    common(p)
    p.add_argument("--norm", type=int, required=True)
    p.add_argument("--qmax", type=int, default=64)
    p.add_argument("--grid", type=int, default=24)
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("admissible", help="bounded local-obstruction check for one integer")
    common(p)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--qmax", type=int, default=120)
    p.set_defaults(func=_cmd_admissible)

    p = sub.add_parser("obstructions", help="bad-modulus scan and progression gcd")
    common(p)
    p.add_argument("--qmax", type=int, default=120)
    p.set_defaults(func=_cmd_obstructions)

    p = sub.add_parser("dimension", help="Hausdorff dimension of the quotient Cantor set")
    common(p)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=_cmd_dimension)

    p = sub.add_parser("series", help="singular series (truncated sum or Euler product)",
                       epilog="CSV columns: q, term_numerator, term_denominator, term")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=["truncated", "euler"], default="euler")
    p.add_argument("--level", type=int, default=100)
    p.set_defaults(func=_cmd_series)

    p = sub.add_parser("circle", help="R = M + E decomposition over a window",
                       epilog="CSV columns: d, R, M, E, exceptional")
    common(p)
    p.add_argument("--norm", type=int, required=True)
    p.add_argument("--qlevel", type=int, default=6)
    p.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--shift", type=int, default=None)
    p.set_defaults(func=_cmd_circle)

    p = sub.add_parser("primroots", help="primitive roots of bounded expansion height",
                       epilog="CSV columns: p, b, height")
    common(p, alphabet=False)
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--height", type=int, default=7)
    p.add_argument("--mod4", action="store_true", help="only primes p = 3 (mod 4)")
    p.add_argument("--min-factor", type=int, default=None,
                   help="require every prime factor of (p-1)/2 to exceed this")
    p.set_defaults(func=_cmd_primroots)

    p = sub.add_parser("schedule", help="auxiliary parameter ladder and its identities",
                       epilog="CSV columns: j, numerator, denominator, level")
    common(p, alphabet=False)
    p.add_argument("--bound", type=float, required=True, help="the ball bound N")
    p.add_argument("--r", required=True, help="spacing parameter, e.g. 1/2 or 0.3")
    p.add_argument("--cr", type=float, default=0.0)
    p.set_defaults(func=_cmd_schedule)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except DomainError as exc:
        print(f"zaremba: domain error: {exc}", file=sys.stderr)
        return 2
    except (ResourceError, OverflowError) as exc:
        print(f"zaremba: resource error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
