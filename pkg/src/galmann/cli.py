"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 numerical failure (degeneracy or
non-convergence).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import emit as out
from .curve import (DEFAULT_SAMPLES, AdmissibilityError, CurveSpec, InversionError,
                    SampledCurve, read_curve_csv, reparametrize_to_arclength,
                    sample_from_data, transform_spec)
from .expr import EvaluationError, ExpressionError, parse_expression
from .frenet import DegenerateCurvature, frenet_apparatus
from .galilean import random_isometry
from .jets import DomainError
from .mannheim import (DegenerateMate, TorsionVanishes, audit_claims, detect_partner,
                       mannheim_mate, synthesize_from_natural)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERIC = 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        self.code = code
        super().__init__(message)


def finite_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return v


def sample_count(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 8:
        raise argparse.ArgumentTypeError("samples must be >= 8")
    return v


def default_samples() -> int:
    env = os.environ.get("GALMANN_SAMPLES")
    if env is None:
        return DEFAULT_SAMPLES
    try:
        return sample_count(env)
    except argparse.ArgumentTypeError as exc:
        raise CliError(f"GALMANN_SAMPLES: {exc}", EXIT_INPUT) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="galmann",
        description="Frenet frames and Mannheim mates of admissible curves in Galilean 3-space.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add_curve(p):
        g = p.add_argument_group("curve")
        g.add_argument("--curve", help='three expressions in t, "fx;fy;fz"')
        g.add_argument("--t0", type=finite_float)
        g.add_argument("--t1", type=finite_float)
        g.add_argument("--data", metavar="CSV", help="point data with header t,x,y,z")

    def add_common(p):
        p.add_argument("--samples", type=sample_count, default=None,
                       help=f"arc-length samples (default {DEFAULT_SAMPLES} or $GALMANN_SAMPLES)")
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("frenet", help="emit the Frenet apparatus as CSV")
    add_curve(p)
    add_common(p)

    p = sub.add_parser("mate", help="emit base and Mannheim mate as CSV")
    add_curve(p)
    p.add_argument("--lambda", dest="lam", type=finite_float, required=True)
    add_common(p)

    p = sub.add_parser("detect", help="test whether the curve has a Mannheim mate")
    add_curve(p)
    add_common(p)

    p = sub.add_parser("synth", help="build a curve from curvature and torsion in s")
    p.add_argument("--kappa", required=True)
    p.add_argument("--tau", required=True)
    p.add_argument("--s0", type=finite_float, required=True)
    p.add_argument("--s1", type=finite_float, required=True)
    add_common(p)

    p = sub.add_parser("audit", help="audit the Mannheim identities on a pair, as JSON")
    add_curve(p)
    p.add_argument("--lambda", dest="lam", type=finite_float, required=True)
    add_common(p)

    p = sub.add_parser("isometry", help="curvature/torsion change under a seeded isometry")
    add_curve(p)
    p.add_argument("--seed", type=int, required=True)
    add_common(p)
    return parser


def load_curve(args, n: int) -> tuple[SampledCurve, Optional[CurveSpec]]:
    if args.data is not None:
        if args.curve is not None:
            raise CliError("give either --curve or --data, not both", EXIT_INPUT)
        t, x, y, z = read_curve_csv(args.data)
        return sample_from_data(t, x, y, z, n), None
    if args.curve is None or args.t0 is None or args.t1 is None:
        raise CliError("--curve, --t0 and --t1 are required (or --data)", EXIT_INPUT)
    spec = CurveSpec.parse(args.curve, args.t0, args.t1)
    return reparametrize_to_arclength(spec, n), spec


def isometry_residuals(curve: SampledCurve, spec: Optional[CurveSpec], seed: int,
                       args=None, n: Optional[int] = None) -> tuple[float, float]:
    """Max change of curvature and torsion under ``random_isometry(seed)``."""
    m = random_isometry(seed)
    fd = frenet_apparatus(curve)
    if spec is not None:
        moved = reparametrize_to_arclength(transform_spec(spec, m), len(curve.s))
    else:
        t, x, y, z = read_curve_csv(args.data)
        p = m.apply_array(np.column_stack([x, y, z]))
        moved = sample_from_data(t, p[:, 0], p[:, 1], p[:, 2], n)
    mfd = frenet_apparatus(moved)
    return (float(np.max(np.abs(mfd.kappa - fd.kappa))),
            float(np.max(np.abs(mfd.tau - fd.tau))))


def dispatch(args) -> str:
    n = args.samples if args.samples is not None else default_samples()
    if args.command == "synth":
        curve = synthesize_from_natural(parse_expression(args.kappa, "s"),
                                        parse_expression(args.tau, "s"),
                                        args.s0, args.s1, max(n, 16))
        return out.frenet_csv(curve, frenet_apparatus(curve))
    curve, spec = load_curve(args, n)
    if args.command == "isometry":
        dk, dt = isometry_residuals(curve, spec, args.seed, args, n)
        return out.isometry_json(args.seed, dk, dt)
    fd = frenet_apparatus(curve)
    if args.command == "frenet":
        return out.frenet_csv(curve, fd)
    if args.command == "detect":
        return out.detection_json(detect_partner(curve, fd))
    pair = mannheim_mate(curve, fd, args.lam, strict=args.command == "mate")
    if args.command == "mate":
        return out.mate_csv(pair)
    return out.audit_json(pair, audit_claims(pair))


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = dispatch(args)
        out.emit(text, args.out)
    except CliError as exc:
        return _fail(str(exc), exc.code)
    except (DegenerateCurvature, DegenerateMate, TorsionVanishes, InversionError) as exc:
        return _fail(str(exc), EXIT_NUMERIC)
    except (ExpressionError, AdmissibilityError, EvaluationError, DomainError,
            ValueError, OSError) as exc:
        return _fail(str(exc), EXIT_INPUT)
    return EXIT_OK


def _fail(message: str, code: int) -> int:
    print(f"galmann: error: {message}", file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
