"""
Command line interface for the ``effhull`` command.

Every sub-command is added by an ``add_parser_<name>`` function that sets
``func`` to the matching ``execute_<name>``.  Results go to stdout (or
``--out``); diagnostics go to stderr.

Exit codes: 0 success, 2 usage error, 3 "inefficient" / "not contained",
4 runtime error.
"""

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from effhull import __version__
from effhull.config import ToleranceConfig, settings
from effhull.errors import EffHullError, MatrixFormatError
from effhull.models import WeightVector
from effhull.services import experiments, generators
from effhull.services.catalog import example_matrices
from effhull.services.efficiency import check_efficiency, is_efficient
from effhull.services.matrix_core import consistency_gap, three_block_matrix, triangular_matrix
from effhull.services.matrix_io import (
    dump_json,
    parse_floats,
    read_matrix,
    read_vector,
    write_rows,
    write_vector,
)
from effhull.services.perturbed import detect_block_structure, hull_subset_efficient
from effhull.services.witnesses import witness_3block, witness_triangular
from effhull.utils.logger import get_logger, set_level

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NEGATIVE = 3
EXIT_RUNTIME = 4

EPILOG = """
Examples:

  # is w efficient for A?
  effhull check --matrix A.csv --vector w.csv

  # does every convex combination of the columns of A stay efficient?
  effhull hull-test --matrix A.csv

  # reproduce the inefficiency counts
  effhull experiment table2 --n 4,8 --trials 10000 --seed 1 --out counts.json
"""


class UsageError(Exception):
    """Raised for a flag value that parses but cannot be used."""


def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--rtol", type=float, help="Relative tolerance for ratio equality.")
    p.add_argument("--edge-rtol", type=float, help="Relative slack of the digraph edge test.")
    p.add_argument("--power-tol", type=float, help="Stopping tolerance of the power iteration.")
    p.add_argument("--workers", type=int, help="Threads used by the experiment counts.")
    p.add_argument("--seed", type=int, default=0, help="Seed of the experiment substreams.")
    p.add_argument("--trials", type=int, help="Number of random trials.")
    p.add_argument("--out", help="Output path; stdout when omitted.")
    p.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Diagnostic verbosity.")
    return p


def _config(args: argparse.Namespace) -> ToleranceConfig:
    return settings.with_overrides(
        rtol=args.rtol,
        edge_rtol=args.edge_rtol,
        power_tol=args.power_tol,
        workers=args.workers,
        log_level=args.log_level,
    )


def _floats(text: str, flag: str, count: Optional[int] = None) -> list[float]:
    try:
        values = parse_floats(text, flag)
    except MatrixFormatError as exc:
        raise UsageError(str(exc)) from exc
    if count is not None and len(values) != count:
        raise UsageError(f"{flag} needs {count} comma-separated values, got {len(values)}")
    return values


def _side_path(out: str, suffix: str) -> Path:
    path = Path(out)
    return path.with_name(f"{path.stem}.{suffix}.json")


# ── check ────────────────────────────────────────────────────────────────────

def add_parser_check(subparsers, common) -> None:
    p = subparsers.add_parser("check", parents=[common], help="Test a vector for efficiency.")
    p.add_argument("--matrix", required=True, help="Reciprocal matrix (CSV or JSON).")
    p.add_argument("--vector", required=True, help="Positive vector (CSV row or column).")
    p.add_argument("--method", choices=["digraph", "recursive", "closed-form"], default="digraph")
    p.set_defaults(func=execute_check)


def execute_check(args, cfg: ToleranceConfig) -> int:
    A = read_matrix(args.matrix, cfg)
    w = read_vector(args.vector)
    cert = check_efficiency(A, w, args.method, cfg)
    dump_json(cert, args.out)
    return EXIT_OK if cert.efficient else EXIT_NEGATIVE


# ── generate ─────────────────────────────────────────────────────────────────

def add_parser_generate(subparsers, common) -> None:
    p = subparsers.add_parser("generate", parents=[common], help="Build a weight vector from a matrix.")
    p.add_argument("--matrix", required=True)
    p.add_argument(
        "--kind",
        choices=["perron", "singular", "geomean", "arith", "convex", "wgm"],
        default="perron",
    )
    p.add_argument("--alpha", help="Comma-separated weights for --kind convex / wgm.")
    p.set_defaults(func=execute_generate)


def execute_generate(args, cfg: ToleranceConfig) -> int:
    A = read_matrix(args.matrix, cfg)
    if args.kind in ("convex", "wgm"):
        alpha = WeightVector(_floats(args.alpha, "--alpha", A.n)) if args.alpha else WeightVector.uniform(A.n)
        w = (generators.convex_combination if args.kind == "convex" else generators.weighted_geometric_mean)(A, alpha)
    elif args.alpha:
        raise UsageError("--alpha only applies to --kind convex or wgm")
    elif args.kind == "perron":
        w = generators.perron_vector(A, cfg).vector
    elif args.kind == "singular":
        w = generators.singular_vector(A, cfg)
    elif args.kind == "geomean":
        w = generators.mean_columns(A, "geometric")
    else:
        w = generators.mean_columns(A, "arithmetic")
    write_vector(w, args.out)
    return EXIT_OK


# ── classify / hull-test ─────────────────────────────────────────────────────

def add_parser_classify(subparsers, common) -> None:
    p = subparsers.add_parser("classify", parents=[common], help="Detect the perturbed-consistent structure.")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=execute_classify)


def execute_classify(args, cfg: ToleranceConfig) -> int:
    A = read_matrix(args.matrix, cfg)
    result = detect_block_structure(A, cfg).to_dict()
    result["consistency_gap"] = consistency_gap(A)
    dump_json(result, args.out)
    return EXIT_OK


def add_parser_hull_test(subparsers, common) -> None:
    p = subparsers.add_parser("hull-test", parents=[common], help="Decide whether C(A) is contained in E(A).")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=execute_hull_test)


def execute_hull_test(args, cfg: ToleranceConfig) -> int:
    verdict = hull_subset_efficient(read_matrix(args.matrix, cfg), cfg)
    dump_json(verdict, args.out)
    return EXIT_NEGATIVE if verdict.contained == "no" else EXIT_OK


# ── witness ──────────────────────────────────────────────────────────────────

def add_parser_witness(subparsers, common) -> None:
    p = subparsers.add_parser("witness", parents=[common], help="Inefficient convex combination for a canonical form.")
    p.add_argument("--family", choices=["3block", "triangular"], required=True)
    p.add_argument("--params", required=True, help="a12,a13,a23 (3block) or a13,a14,a24 (triangular).")
    p.set_defaults(func=execute_witness)


def execute_witness(args, cfg: ToleranceConfig) -> int:
    a, b, c = _floats(args.params, "--params", 3)
    if args.family == "3block":
        u, w = witness_3block(a, b, c, cfg)
        A = three_block_matrix(4, a, b, c)
    else:
        u, w = witness_triangular(a, b, c, cfg)
        A = triangular_matrix(5, a, b, c)
    doc = {
        "family": args.family,
        "params": [a, b, c],
        "coefficients": [float(x) for x in u],
        "witness": w.tolist(),
        "certificate": is_efficient(A, w, cfg).model_dump(mode="json"),
    }
    if args.out:
        write_vector(w, args.out)
        dump_json(doc, _side_path(args.out, "certificate"))
    else:
        dump_json(doc)
    return EXIT_OK


# ── experiment ───────────────────────────────────────────────────────────────

def add_parser_experiment(subparsers, common) -> None:
    p = subparsers.add_parser("experiment", help="Seeded Monte Carlo experiments.")
    sub = p.add_subparsers(dest="experiment", required=True)

    t2 = sub.add_parser("table2", parents=[common], help="Inefficient convex combinations per a13.")
    t2.add_argument("--n", default="4,8,20,100", help="Comma-separated matrix sizes.")
    t2.add_argument("--family", choices=["three-block", "triangular"], default="three-block")
    t2.add_argument("--a12", type=float, default=4.0)
    t2.add_argument("--a23", type=float, default=2.0)
    t2.add_argument("--a14", type=float)
    t2.add_argument("--a24", type=float)
    t2.add_argument("--a13", default="8.2,9,12,20,50,100,1000,10000")
    t2.set_defaults(func=execute_table2)

    t3 = sub.add_parser("table3", parents=[common], help="Perron, singular and mean verdicts per (n, a13).")
    t3.add_argument("--n", default="4,8,20,100")
    t3.add_argument("--a12", type=float, default=4.0)
    t3.add_argument("--a23", type=float, default=2.0)
    t3.add_argument("--a13", default="8.2,9,12,20,50,100,1000,10000")
    t3.set_defaults(func=execute_table3)

    cmp_ = sub.add_parser("compare", parents=[common], help="Convex vs geometric combination divergence.")
    source = cmp_.add_mutually_exclusive_group(required=True)
    source.add_argument("--matrix", help="Matrix file.")
    source.add_argument("--example", choices=["A", "D1", "D2"], help="Built-in 8x8 example or a diagonal variant.")
    cmp_.set_defaults(func=execute_compare)


def _sizes(text: str) -> list[int]:
    values = _floats(text, "--n")
    if any(v != int(v) or v < 1 for v in values):
        raise UsageError("--n takes positive integers")
    return [int(v) for v in values]


def execute_table2(args, cfg: ToleranceConfig) -> int:
    if args.family == "triangular" and (args.a14 is None or args.a24 is None):
        raise UsageError("--family triangular needs --a14 and --a24")
    a13_list = _floats(args.a13, "--a13")
    reports = [
        experiments.inefficiency_count(
            n, args.a12, args.a23, a13_list, trials=args.trials, seed=args.seed, cfg=cfg,
            family=args.family, a14=args.a14, a24=args.a24,
        )
        for n in _sizes(args.n)
    ]
    dump_json([r.model_dump(mode="json") for r in reports], args.out)
    return EXIT_OK


def execute_table3(args, cfg: ToleranceConfig) -> int:
    grid = experiments.perron_efficiency_grid(_sizes(args.n), args.a12, args.a23, _floats(args.a13, "--a13"), cfg)
    dump_json(grid, args.out)
    return EXIT_OK


def execute_compare(args, cfg: ToleranceConfig) -> int:
    if args.matrix:
        A, label = read_matrix(args.matrix, cfg), Path(args.matrix).name
    else:
        A, label = example_matrices()[args.example], args.example
    report = experiments.compare_run(A, args.trials, args.seed, cfg, label=label)
    if args.out:
        rows = ([r.trial_index, r.norm_convex, r.norm_geometric] for r in report.trials)
        write_rows(args.out, ["trial", "norm_convex", "norm_geometric"], rows)
        dump_json(
            {"matrix": label, "seed": report.seed, "reference_norms": report.reference_norms},
            _side_path(args.out, "references"),
        )
    else:
        dump_json(report)
    return EXIT_OK


# ── Entry points ─────────────────────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="effhull",
        description="Pareto efficiency of weight vectors for reciprocal matrices.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_flags()
    add_parser_check(subparsers, common)
    add_parser_generate(subparsers, common)
    add_parser_classify(subparsers, common)
    add_parser_hull_test(subparsers, common)
    add_parser_witness(subparsers, common)
    add_parser_experiment(subparsers, common)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse ``argv``, dispatch, and map failures onto exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help / --version exit 0, parse errors exit 2
        return int(exc.code or 0)

    try:
        cfg = _config(args)
    except ValidationError as exc:
        print(f"effhull: invalid tolerance override: {exc.errors()[0]['loc'][0]}: {exc.errors()[0]['msg']}",
              file=sys.stderr)
        return EXIT_USAGE
    if args.log_level:
        set_level(args.log_level)

    try:
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"effhull {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EffHullError, OSError) as exc:
        logger.error("%s failed: %s", args.command, exc)
        return EXIT_RUNTIME


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
