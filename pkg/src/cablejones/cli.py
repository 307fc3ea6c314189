"""Command-line front end: ``cablejones {jones,kappa,scan,verify,fit}``.

Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 insufficient data.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from pathlib import Path

from .asymptotics import CSV_HEADER, ScanTable, compute_sample, residue_class_fit, scan
from .errors import BetaZero, CableJonesError, InsufficientData, InvalidParams
from .jones import Framing, IteratedCableParams, cable_jones, cable_jones_oracle
from .numeric import DEFAULT_PREC
from .skein import framing_change

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_DATA = 0, 1, 2, 3
APPLICABILITY_MSG = "warning: hypothesis beta*gamma>0 not satisfied"
# cross-route tolerance for --method both when --tol is not given
BOTH_TOL = 1e-8


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags already; keep that but route through our handler
    def error(self, message):
        raise UsageError(message)


def n_range(text: str) -> tuple:
    """``"7"`` -> (7, 7); ``"1..30"`` -> (1, 30)."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO..HI, got {text!r}") from None
    if lo < 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"need 0 <= LO <= HI, got {text!r}")
    return lo, hi


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _precision(text: str) -> int:
    v = int(text)
    if v < 53:
        raise argparse.ArgumentTypeError("precision must be at least 53 bits")
    return v


def _tol(text: str) -> float:
    v = float(text)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError("tolerance must be a positive finite number")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=_precision, default=DEFAULT_PREC, help="working precision in bits")
    common.add_argument("--tol", type=_tol, default=None, help="tolerance for cross-route checks")
    common.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")
    common.add_argument("--jobs", type=_positive_int, default=1, help="worker processes")

    knot = argparse.ArgumentParser(add_help=False)
    for name in ("p1", "q1", "p2", "q2"):
        knot.add_argument(f"--{name}", type=int, required=True)

    p = _Parser(prog="cablejones", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    j = sub.add_parser("jones", parents=[common, knot], help="colored Jones polynomial as JSON")
    j.add_argument("--color", "--n", dest="color", type=int, required=True)
    j.add_argument("--framing", choices=[f.value for f in Framing], default=Framing.BLACKBOARD.value)
    j.add_argument("--check-oracle", action="store_true", help="compare with two-step skein cabling")

    for name, helptext in (("kappa", "kappa_N at the root of unity as CSV"), ("scan", "kappa_N over a range of N")):
        k = sub.add_parser(name, parents=[common, knot], help=helptext)
        k.add_argument("--n", "--color", dest="n", type=n_range, required=True, help="N or LO..HI")
        k.add_argument("--method", choices=["exact", "analytic", "auto", "both"], default="auto")
        if name == "scan":
            k.add_argument("--stride", type=_positive_int, default=1)
            k.add_argument("--resume", action="store_true", help="keep rows already in --out")

    v = sub.add_parser("verify", parents=[common], help="run a verification suite, JSON report")
    v.add_argument("--suite", choices=["skein", "integral", "lemmas", "decomposition", "all"], default="all")
    v.add_argument("--timings", action="store_true", help="include per-check wall-clock runtime")

    f = sub.add_parser("fit", parents=[common], help="residue-class power-law fit of a scan CSV")
    f.add_argument("input", type=Path)
    f.add_argument("--periods", type=lambda s: [int(x) for x in s.split(",")], default=None,
                   help="comma-separated period candidates (default: derived from the knot)")
    f.add_argument("--window", type=n_range, default=None, help="restrict to LO..HI")
    f.add_argument("--robust", action="store_true", help="Theil-Sen instead of least squares")
    return p


def _emit(text: str, out: Path | None) -> None:
    """Write all of ``text`` or nothing: temp file then rename."""
    if out is None:
        sys.stdout.write(text)
        return
    tmp = out.with_name(out.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, out)


def _params(args) -> IteratedCableParams:
    return IteratedCableParams(args.p1, args.q1, args.p2, args.q2)


def cmd_jones(args) -> int:
    params = _params(args)
    if args.color < 0:
        raise InvalidParams("color must be nonnegative")
    poly = cable_jones(params, args.color)
    status = EXIT_OK
    report = {"params": params.to_json(), "N": args.color, "framing": args.framing}
    if args.check_oracle:
        agree = poly == cable_jones_oracle(params, args.color)
        report["oracle_agrees"] = agree
        if not agree:
            status = EXIT_VERIFY
    if args.framing == Framing.ZERO.value:
        poly = poly * framing_change(args.color, -params.p1 * params.q1)
    report["polynomial"] = poly.to_json()
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    if status:
        print("double-sum and skein routes disagree", file=sys.stderr)
    return status


def _csv_text(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _both_rows(params, Ns, precision, tol):
    """Exact rows plus the relative gap to the analytic route."""
    rows, worst = [], 0.0
    for N in Ns:
        ex = compute_sample(params, N, "exact", precision)
        an = compute_sample(params, N, "analytic", precision)
        a, b = complex(ex.kappa), complex(an.kappa)
        gap = abs(a - b) / abs(a) if a != 0 else abs(b)
        worst = max(worst, gap)
        rows.append(ex.csv_row() + [f"{gap:.3e}"])
    return rows, worst <= tol, worst


def _check_kappa_args(args, params):
    if args.method in ("analytic", "both") and params.beta_num == 0:
        raise BetaZero("beta = 0 (q1 = p1*p2*q2): analytic route undefined")
    if not params.vc_applicable:
        print(APPLICABILITY_MSG, file=sys.stderr)


def cmd_kappa(args) -> int:
    params = _params(args)
    _check_kappa_args(args, params)
    Ns = range(args.n[0], args.n[1] + 1)
    if args.method == "both":
        tol = args.tol or BOTH_TOL
        rows, ok, worst = _both_rows(params, Ns, args.precision, tol)
        _emit(_csv_text(rows, CSV_HEADER + ["agreement"]), args.out)
        if not ok:
            print(f"routes disagree: max relative gap {worst:.3e} > {tol:.1e}", file=sys.stderr)
            return EXIT_VERIFY
        return EXIT_OK
    rows = [compute_sample(params, N, args.method, args.precision).csv_row() for N in Ns]
    _emit(_csv_text(rows, CSV_HEADER), args.out)
    return EXIT_OK


def cmd_scan(args) -> int:
    params = _params(args)
    _check_kappa_args(args, params)
    lo, hi = args.n
    if args.method == "both":
        if args.resume:
            raise InvalidParams("--resume is not supported with --method both")
        return cmd_kappa(argparse.Namespace(**{**vars(args), "n": (lo, hi)}))
    with warnings.catch_warnings():
        # the warning was already printed in neutral form
        warnings.simplefilter("ignore")
        table = scan(params, lo, hi, args.stride, args.method, args.precision, args.jobs, args.out, args.resume)
    if args.out is None:
        _emit(_csv_text([s.csv_row() for s in table.samples], CSV_HEADER), None)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import SUITES, run_suite

    names = SUITES if args.suite == "all" else (args.suite,)
    reports = [run_suite(n) for n in names]
    doc = {"passed": all(r.passed for r in reports), "suites": [r.to_json(args.timings) for r in reports]}
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    failed = [f"{r.suite}:{name}" for r in reports for name in r.failed]
    if failed:
        print("failed checks:\n  " + "\n  ".join(failed), file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_fit(args) -> int:
    if not args.input.exists():
        raise InvalidParams(f"no such file: {args.input}")
    if args.input.stat().st_size == 0:
        raise InsufficientData("empty CSV")
    try:
        table = ScanTable.read(args.input)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        if isinstance(exc, CableJonesError):
            raise
        raise InvalidParams(f"malformed CSV: {exc}") from None
    if args.window is not None:
        table = table.window(*args.window)
    report = residue_class_fit(table, args.periods, robust=args.robust)
    _emit(json.dumps(report.to_json(), indent=2) + "\n", args.out)
    print(report.summary(), file=sys.stderr)
    return EXIT_OK


COMMANDS = {"jones": cmd_jones, "kappa": cmd_kappa, "scan": cmd_scan, "verify": cmd_verify, "fit": cmd_fit}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"cablejones: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](args)
    except InsufficientData as exc:
        print(f"insufficient data: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (CableJonesError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
