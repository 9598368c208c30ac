"""Command line entry point: ``epipolar <command> INPUT [options]``.

Exit codes: 0 EXISTS, 1 NOT_EXISTS, 2 UNDECIDED, 64 input error. With
``--which both`` the fundamental verdict sets the code.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
from typing import Optional, Sequence

from .common import Tolerances
from .errors import EpipolarError, InputParseError
from .essential import demazure_residuals, is_essential
from .fundamental import epipolar_residual, sigma_ratios
from .io import parse_input, parse_rational
from .linalg import RationalMatrix, rank
from .report import (
    EXIT_INPUT_ERROR,
    build_report,
    classify_report,
    dumps,
    render_text,
    to_jsonable,
)

EPILOG = """
examples:
  epipolar decide-f fixtures/rank_one_and_three.csv
  epipolar decide-e fixtures/five_points_no_real_e.csv --format text
  epipolar decide fixtures/ --which both            # batch over a directory
  epipolar verify data.csv --matrix "0 1 0; 0 0 1; 0 0 0"
"""


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", help="CSV (x1,x2,y1,y2 per row) or JSON file, or a directory")
    p.add_argument("--input-format", choices=["csv", "json"], default=None,
                   help="default: from the file extension")
    p.add_argument("--format", choices=["json", "text"], default="json")
    p.add_argument("--tol-res", type=float, default=Tolerances.tol_res)
    p.add_argument("--tol-rank", type=float, default=Tolerances.tol_rank)
    p.add_argument("--grid-radius", type=int, default=Tolerances.grid_radius)
    p.add_argument("--timings", action="store_true", help="include wall-clock timings")
    p.add_argument("--jobs", type=int, default=1, help="worker processes in batch mode")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epipolar",
        description="Decide existence of fundamental and essential matrices exactly.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="decide fundamental and/or essential existence")
    _add_common(p)
    p.add_argument("--which", choices=["fundamental", "essential", "both"], default="both")
    p.set_defaults(func=cmd_decide)

    for name, which in (("decide-f", "fundamental"), ("decide-e", "essential")):
        p = sub.add_parser(name, help=f"decide {which} matrix existence")
        _add_common(p)
        p.set_defaults(func=cmd_decide, which=which)

    p = sub.add_parser("witness", help="print only the witness matrix")
    _add_common(p)
    p.add_argument("--which", choices=["fundamental", "essential"], default="fundamental")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("classify", help="collinearity classes and rank-one kernel classifiers")
    _add_common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="check a user-supplied 3x3 matrix against the data")
    _add_common(p)
    p.add_argument("--matrix", required=True,
                   help='nine rationals, rows separated by ";", e.g. "0 1 0; 0 0 1; 0 0 0"')
    p.set_defaults(func=cmd_verify)
    return parser


def _tolerances(args) -> Tolerances:
    return Tolerances(args.tol_res, args.tol_rank, args.grid_radius)


def _emit(report: dict, fmt: str) -> None:
    sys.stdout.write(render_text(report) if fmt == "text" else dumps(report))


def _decide_one(path: str, args) -> tuple:
    doc = parse_input(path, args.input_format)
    return build_report(doc.to_correspondences(), args.which, _tolerances(args),
                        name=doc.name, timings=args.timings)


def _batch_worker(payload):
    path, args = payload
    try:
        return _decide_one(path, args)
    except (InputParseError, EpipolarError, OSError) as exc:
        return {"error": str(exc)}, EXIT_INPUT_ERROR


def _batch(args) -> int:
    files = sorted(f for f in os.listdir(args.input)
                   if f.lower().endswith((".csv", ".json")))
    paths = [os.path.join(args.input, f) for f in files]
    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_batch_worker, [(p, args) for p in paths]))
    else:
        results = [_batch_worker((p, args)) for p in paths]
    summary: dict = {}
    for _, code in results:
        summary[str(code)] = summary.get(str(code), 0) + 1
    out = {
        "schema": "epipolar-batch/1",
        "reports": {f: r for f, (r, _) in zip(files, results)},
        "exit_codes": {f: c for f, (_, c) in zip(files, results)},
        "summary": summary,
    }
    if args.format == "text":
        for f, (r, c) in zip(files, results):
            sys.stdout.write(f"[{f}] exit={c}\n")
            if "error" not in r:
                sys.stdout.write(render_text(r))
    else:
        sys.stdout.write(dumps(out))
    return max((c for _, c in results), default=0)


def cmd_decide(args) -> int:
    if os.path.isdir(args.input):
        return _batch(args)
    report, code = _decide_one(args.input, args)
    _emit(report, args.format)
    return code


def cmd_witness(args) -> int:
    report, code = _decide_one(args.input, args)
    section = report[args.which]
    witness = section["witness"]
    if args.format == "text":
        if witness is None:
            sys.stdout.write(f"no witness ({section['verdict']})\n")
        else:
            for row in witness["matrix"]["rows"]:
                sys.stdout.write(" ".join(str(v) for v in row) + "\n")
    else:
        sys.stdout.write(json.dumps(witness, indent=2, sort_keys=True) + "\n")
    return code


def cmd_classify(args) -> int:
    doc = parse_input(args.input, args.input_format)
    out = classify_report(doc.to_correspondences(), name=doc.name)
    sys.stdout.write(json.dumps(out, indent=2, sort_keys=True) + "\n")
    return 0


def parse_matrix(text: str) -> RationalMatrix:
    rows = [r.replace(",", " ").split() for r in text.split(";") if r.strip()]
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise InputParseError("--matrix needs three rows of three entries")
    return RationalMatrix.from_rows([[parse_rational(v) for v in r] for r in rows])


def cmd_verify(args) -> int:
    doc = parse_input(args.input, args.input_format)
    c = doc.to_correspondences()
    f = parse_matrix(args.matrix)
    constraints = c.Z @ f.vec
    r = rank(f)
    satisfies = all(v == 0 for v in constraints)
    out = {
        "schema": "epipolar-verify/1",
        "name": doc.name,
        "rank": r,
        "epipolar_values": to_jsonable(constraints),
        "satisfies_constraints": satisfies,
        "is_fundamental": satisfies and r == 2,
        "demazure_residuals": to_jsonable(demazure_residuals(f)),
        "is_essential": satisfies and not f.is_zero() and is_essential(f),
        "residual": epipolar_residual(c.Z, f) if not f.is_zero() else 0.0,
    }
    if not f.is_zero():
        out["sigma2_over_sigma1"], out["sigma3_over_sigma1"] = sigma_ratios(f.to_float())
    sys.stdout.write(json.dumps(out, indent=2, sort_keys=True) + "\n")
    return 0 if out["is_fundamental"] else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputParseError, OSError) as exc:
        sys.stderr.write(f"epipolar: input error: {exc}\n")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
