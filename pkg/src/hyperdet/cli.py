"""Command-line interface: ``hyperdet represent | generate | verify | bench``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time

import numpy as np

from . import bench as bench_mod
from .detrep import (
    RepresentOptions,
    load_representation,
    represent,
    representation_to_dict,
)
from .errors import (
    DegreeError,
    DimensionError,
    HyperdetError,
    InputError,
    NotHyperbolic,
    PolynomialParseError,
    TransversalityFailure,
)
from .generate import generate_random_hyperbolic
from .intersect import load_points
from .poly import (
    format_polynomial,
    load_polynomial,
    parse_polynomial,
    poly_from_dict,
    poly_to_dict,
)
from .verify import coefficient_error, hyperbolicity_check, representation_error
from . import numerics

EXIT_OK = 0
EXIT_FAILED_CHECK = 1
EXIT_NOT_HYPERBOLIC = 2
EXIT_TRANSVERSALITY = 3
EXIT_SOLVER = 4
EXIT_INPUT = 5


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the input-error code, not argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _direction(text: str):
    try:
        parts = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad direction {text!r}")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("direction needs three comma-separated numbers")
    return tuple(parts)


def _degrees(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in text.split(",") if v]


def _write(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _dump(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _read_input_poly(args):
    if args.poly is not None:
        return parse_polynomial(args.poly)
    if args.input is not None:
        return load_polynomial(args.input)
    raise InputError("give a polynomial with --poly or --in")


def _load_basis(path):
    with open(path) as fh:
        data = json.load(fh)
    items = data["basis"] if isinstance(data, dict) else data
    return [poly_from_dict(item) for item in items]


def _common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--tol", type=float, default=1e-6, help="relative error tolerance")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def _poly_inputs(p: argparse.ArgumentParser):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--poly", help='polynomial text, e.g. "x^2 - y^2 - z^2"')
    src.add_argument("--in", dest="input", help="polynomial JSON file")
    p.add_argument("--e", type=_direction, default=(1.0, 0.0, 0.0), help="direction, default 1,0,0")


def cmd_represent(args) -> int:
    f = _read_input_poly(args)
    opts = RepresentOptions(seed=args.seed, max_retries=args.max_retries)
    if args.interlacer:
        opts.interlacer = load_polynomial(args.interlacer)
    if args.points:
        opts.points, opts.S_indices = load_points(args.points)
    if args.basis:
        opts.basis = _load_basis(args.basis)
    t0 = time.perf_counter()
    rep = represent(f, args.e, opts)
    elapsed = time.perf_counter() - t0
    report = representation_error(f, rep, seed=args.seed)
    text = _dump(representation_to_dict(rep, report))
    if args.out:
        _write(args.out, text)
    elif args.json:
        sys.stdout.write(text)
    summary = (
        f"d={rep.d} c={rep.c:.12g} rel_error={report.rel_error:.3e} "
        f"residual={rep.lsq.residual_norm:.3e} time={elapsed:.3f}s"
    )
    print(summary, file=sys.stderr if args.json and not args.out else sys.stdout)
    for w in rep.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return EXIT_OK


def cmd_generate(args) -> int:
    f = generate_random_hyperbolic(args.degree, args.seed)
    text = _dump(poly_to_dict(f)) if args.json or (args.out and args.out.endswith(".json")) else format_polynomial(f) + "\n"
    _write(args.out, text)
    return EXIT_OK


def cmd_verify(args) -> int:
    f = _read_input_poly(args)
    pencil, c, _ = load_representation(args.rep)
    if pencil.d != f.degree:
        raise DimensionError(f"polynomial has degree {f.degree} but the representation is {pencil.d}x{pencil.d}")
    report = coefficient_error(f, pencil, c, seed=args.seed)
    try:
        definite, lam = numerics.is_positive_definite(pencil.evaluate(np.array(args.e)))
    except HyperdetError:
        definite, lam = False, float("nan")
    hyp = hyperbolicity_check(f, args.e, seed=args.seed)
    passed = report.rel_error <= args.tol and definite
    result = {
        **report.to_dict(),
        "definite": bool(definite),
        "min_eigenvalue": lam,
        "hyperbolic": bool(hyp),
        "tol": args.tol,
        "passed": bool(passed),
    }
    if args.json:
        _write(args.out, _dump(result))
    else:
        lines = [
            f"abs_error={report.abs_error:.3e} rel_error={report.rel_error:.3e} c={c:.12g}",
            f"definite_at_e={definite} min_eigenvalue={lam:.6g}",
            f"hyperbolic={bool(hyp)} (sampled lines; worst imaginary part {hyp.worst_imag:.2e})",
            "PASS" if passed else "FAIL",
        ]
        _write(args.out, "\n".join(lines) + "\n")
    return EXIT_OK if passed else EXIT_FAILED_CHECK


def cmd_bench(args) -> int:
    degrees = _degrees(args.degrees)
    rows = bench_mod.run_bench(degrees, args.instances, args.seed)
    if args.json:
        _write(args.out, _dump([r.__dict__ for r in rows]))
        return EXIT_OK
    print(bench_mod.format_table(rows))
    csv_text = bench_mod.format_csv(rows)
    if args.out:
        _write(args.out, csv_text)
    else:
        print()
        sys.stdout.write(csv_text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="hyperdet",
        description="Definite Hermitian determinantal representations of hyperbolic plane curves.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("represent", help="compute f = c det(x M1 + y M2 + z M3)")
    _poly_inputs(p)
    p.add_argument("--interlacer", help="interlacer g as polynomial JSON")
    p.add_argument("--points", help="intersection point-set JSON (with optional S_indices)")
    p.add_argument("--basis", help="vanishing basis JSON: {\"basis\": [poly, ...]}")
    p.add_argument("--max-retries", type=int, default=3)
    _common(p)
    p.set_defaults(func=cmd_represent)

    p = sub.add_parser("generate", help="random hyperbolic polynomial det(xI + y(B+B^T) + z(C+C^T))")
    p.add_argument("--degree", "-d", type=int, required=True)
    _common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="check a representation against a polynomial")
    _poly_inputs(p)
    p.add_argument("--rep", required=True, help="representation JSON")
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="timing and error table over random instances")
    p.add_argument("--degrees", default="3..10", help="e.g. 3..10 or 3,5,8")
    p.add_argument("--instances", type=int, default=20)
    _common(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except NotHyperbolic as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_HYPERBOLIC
    except TransversalityFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRANSVERSALITY
    except (InputError, PolynomialParseError, DimensionError, DegreeError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (HyperdetError, np.linalg.LinAlgError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
