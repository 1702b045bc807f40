"""Command-line front end.

Subcommands::

    reduce   LLL- or BKZ-reduce a basis file
    svp      enumerate the shortest vector of a basis
    bound    Minkowski bound and first-vector ratio
    gen      emit a seeded test lattice
    profile  stage-timing CSV over generated lattices
    sweep    precision-sweep CSV over generated lattices
    check    verify that one basis is a reduction of another

Matrix arguments are file paths in the bracketed text format; ``-``
reads stdin / writes stdout. Exit status: 0 success, 1 failed checks or
domain errors, 2 usage errors. Results print as ``key=value`` lines so
runs are self-describing; reruns with equal inputs print identical bytes
(timing lines aside).

Working precision comes from --precision (e.g. ``113bits``, ``200digits``
or a bare bit count), else the LATRED_PRECISION environment variable,
else a dimension heuristic: 113 bits up to dimension 30, 8 bits per
dimension beyond.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import List, Optional

from .bkz import BKZParams, bkz_reduce
from .enumeration import EnumRequest, enumerate_shortest
from .experiments import (
    precision_sweep,
    profile_rows_to_csv,
    profile_series,
    sweep_rows_to_csv,
)
from .generator import GenSpec, generate
from .lattice import (
    DEFAULT_TARGET_RATIO,
    SingularBasisError,
    approximation_ratio,
    det_lattice,
    minkowski_bound,
)
from .lll import LLLParams, LoopLimitError, lll_reduce
from .matrixio import MatrixParseError, read_basis_file, write_basis_file
from .numerics import PrecisionCtx, PrecisionError
from .qr import qr_decompose
from .verify import verify_reduction

_PRECISION_ENV = "LATRED_PRECISION"


def parse_precision(text: str) -> PrecisionCtx:
    """'113bits', '200digits', or a bare bit count."""
    t = text.strip().lower()
    try:
        if t.endswith("digits"):
            return PrecisionCtx.from_digits(int(t[: -len("digits")]))
        if t.endswith("bits"):
            return PrecisionCtx(int(t[: -len("bits")]))
        return PrecisionCtx(int(t))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad precision {text!r}: {exc}") from exc


def default_precision(dimension: int) -> PrecisionCtx:
    return PrecisionCtx(113 if dimension <= 30 else 8 * dimension)


def _resolve_precision(args, dimension: int) -> PrecisionCtx:
    if getattr(args, "precision", None) is not None:
        return args.precision
    env = os.environ.get(_PRECISION_ENV)
    if env:
        return parse_precision(env)
    return default_precision(dimension)


def _emit(line: str, *, err: bool = False) -> None:
    # err routes the summary to stderr when a payload owns stdout
    (sys.stderr if err else sys.stdout).write(line + "\n")


def _cmd_reduce(args) -> int:
    basis = read_basis_file(args.input)
    ctx = _resolve_precision(args, basis.n)
    if args.algorithm == "lll":
        outcome = lll_reduce(basis, LLLParams(delta=args.delta, ctx=ctx))
        reduced = outcome.basis
        extra = f"swaps={outcome.swaps} size_reductions={outcome.size_reductions}"
    else:
        params = BKZParams(
            beta=args.beta, delta=args.delta, ctx=ctx, max_tours=args.max_tours
        )
        outcome = bkz_reduce(basis, params)
        reduced = outcome.basis
        extra = (
            f"tours={outcome.tours} insertions={outcome.insertions} "
            f"converged={str(outcome.converged).lower()}"
        )
    write_basis_file(reduced, args.output)
    report = approximation_ratio(reduced, ctx)
    _emit(
        f"algorithm={args.algorithm} n={basis.n} precision_bits={ctx.mantissa_bits} "
        f"delta={args.delta} first_norm={float(report.achieved_norm):.6f} "
        f"bound_ratio={float(report.ratio):.6f} {extra}",
        err=args.output == "-",
    )
    return 0


def _cmd_svp(args) -> int:
    basis = read_basis_file(args.input)
    ctx = _resolve_precision(args, basis.n)
    r = qr_decompose(basis, ctx)
    if args.radius is not None:
        if args.radius <= 0:
            raise ValueError("radius must be positive")
        radius_sq = args.radius * args.radius
    else:
        # just past the Minkowski bound, which always contains a vector
        bound = minkowski_bound(basis.n, det_lattice(basis), ctx)
        radius_sq = 1.05 * 1.05 * float(bound) * float(bound)
    enum_ctx = args.enum_precision or PrecisionCtx(53)
    result = enumerate_shortest(
        EnumRequest(r_block=r, radius_sq=radius_sq, ctx=enum_ctx)
    )
    _emit(f"n={basis.n} radius_sq={radius_sq:.6f} precision_bits={ctx.mantissa_bits}")
    if result is None:
        _emit("found=false")
        return 1
    vec = [
        sum(c * row[t] for c, row in zip(result.coeffs, basis.rows))
        for t in range(basis.m)
    ]
    norm_sq = sum(x * x for x in vec)
    _emit("found=true")
    _emit("coefficients=" + " ".join(str(c) for c in result.coeffs))
    _emit("vector=" + " ".join(str(x) for x in vec))
    _emit(f"norm_sq={norm_sq} norm={math.sqrt(norm_sq):.6f} nodes={result.nodes_visited}")
    return 0


def _cmd_bound(args) -> int:
    basis = read_basis_file(args.input)
    ctx = _resolve_precision(args, basis.n)
    report = approximation_ratio(basis, ctx, target=args.target)
    _emit(
        f"n={basis.n} minkowski_bound={float(report.bound):.6f} "
        f"first_norm={float(report.achieved_norm):.6f} "
        f"ratio={float(report.ratio):.6f} target={args.target} "
        f"met={str(report.met).lower()}"
    )
    return 0


def _cmd_gen(args) -> int:
    spec = GenSpec(dimension=args.dimension, seed=args.seed, bit_size=args.bits)
    basis = generate(spec)
    write_basis_file(basis, args.output)
    _emit(
        f"dimension={args.dimension} bit_size={spec.effective_bit_size} "
        f"seed={args.seed} prime={basis.rows[0][0]}",
        err=args.output == "-",
    )
    return 0


def _parse_dims(text: str) -> List[int]:
    dims = [int(part) for part in text.split(",") if part]
    if not dims:
        raise argparse.ArgumentTypeError("need at least one dimension")
    return dims


def _parse_bits_list(text: str) -> List[int]:
    bits = [int(part) for part in text.split(",") if part]
    if not bits:
        raise argparse.ArgumentTypeError("need at least one precision")
    return bits


def _cmd_profile(args) -> int:
    ctx = args.precision or default_precision(max(args.dims))
    specs = [GenSpec(dimension=d, seed=args.seed, bit_size=args.bits) for d in args.dims]
    params = BKZParams(
        beta=args.beta, delta=args.delta, ctx=ctx, max_tours=args.max_tours
    )
    rows = [row for _, _, row in profile_series(specs, params)]
    text = profile_rows_to_csv(rows)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
        _emit(f"rows={len(rows)} out={args.out} precision_bits={ctx.mantissa_bits}")
    return 0


def _cmd_sweep(args) -> int:
    specs = [GenSpec(dimension=d, seed=args.seed, bit_size=args.bits) for d in args.dims]
    rows = precision_sweep(
        specs,
        args.precisions,
        beta=args.beta,
        delta=args.delta,
        max_tours=args.max_tours,
        max_scan_iterations=args.max_scan_iterations,
        jobs=args.jobs,
    )
    text = sweep_rows_to_csv(rows)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
        _emit(f"rows={len(rows)} out={args.out}")
    return 0


def _cmd_check(args) -> int:
    original = read_basis_file(args.original)
    candidate = read_basis_file(args.candidate)
    report = verify_reduction(original, candidate, delta=args.delta)
    _emit(
        f"lattice_unchanged={str(report.lattice_unchanged).lower()} "
        f"size_reduced={str(report.size_reduced).lower()} "
        f"lovasz={str(report.lovasz_holds).lower()} "
        f"delta={args.delta} precision_bits={report.precision_bits}"
    )
    _emit(f"ok={str(report.ok).lower()}")
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latred",
        description="Lattice basis reduction toolkit over exact integers.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_precision(p):
        p.add_argument(
            "--precision",
            type=parse_precision,
            default=None,
            help="working precision, e.g. 113bits, 200digits, or a bit count "
            f"(default: dimension heuristic, or ${_PRECISION_ENV})",
        )

    p = sub.add_parser("reduce", help="LLL- or BKZ-reduce a basis")
    p.add_argument("input", help="basis file, - for stdin")
    p.add_argument("output", help="reduced basis file, - for stdout")
    p.add_argument("--algorithm", choices=("lll", "bkz"), default="bkz")
    p.add_argument("--delta", type=float, default=0.99)
    p.add_argument("--beta", type=int, default=20, help="BKZ block size")
    p.add_argument("--max-tours", type=int, default=40)
    add_precision(p)
    p.set_defaults(func=_cmd_reduce)

    p = sub.add_parser("svp", help="enumerate the shortest vector")
    p.add_argument("input", help="basis file, - for stdin")
    p.add_argument(
        "--radius",
        type=float,
        default=None,
        help="strict search radius (vector length); default 1.05x Minkowski",
    )
    p.add_argument(
        "--enum-precision",
        type=parse_precision,
        default=None,
        help="enumeration arithmetic precision (default 53 bits)",
    )
    add_precision(p)
    p.set_defaults(func=_cmd_svp)

    p = sub.add_parser("bound", help="Minkowski bound and first-vector ratio")
    p.add_argument("input", help="basis file, - for stdin")
    p.add_argument("--target", type=float, default=DEFAULT_TARGET_RATIO)
    add_precision(p)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("gen", help="emit a seeded test lattice")
    p.add_argument("output", help="basis file, - for stdout")
    p.add_argument("--dimension", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--bits", type=int, default=None, help="prime width (default 10n)")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("profile", help="stage-timing CSV over generated lattices")
    p.add_argument("--dims", type=_parse_dims, required=True, help="e.g. 20,30,40")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--bits", type=int, default=None)
    p.add_argument("--beta", type=int, default=20)
    p.add_argument("--delta", type=float, default=0.99)
    p.add_argument("--max-tours", type=int, default=40)
    p.add_argument("--out", required=True, help="CSV path, - for stdout")
    add_precision(p)
    p.set_defaults(func=_cmd_profile)

    p = sub.add_parser("sweep", help="precision-sweep CSV over generated lattices")
    p.add_argument("--dims", type=_parse_dims, required=True)
    p.add_argument("--precisions", type=_parse_bits_list, required=True,
                   help="mantissa widths, e.g. 53,113,256,664")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--bits", type=int, default=None)
    p.add_argument("--beta", type=int, default=20)
    p.add_argument("--delta", type=float, default=0.99)
    p.add_argument("--max-tours", type=int, default=40)
    p.add_argument("--max-scan-iterations", type=int, default=None,
                   help="per-scan LLL iteration cap (bounds time lost to a "
                   "precision that cannot converge)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True, help="CSV path, - for stdout")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("check", help="verify a claimed reduction")
    p.add_argument("original", help="basis file, - for stdin")
    p.add_argument("candidate", help="reduced basis file")
    p.add_argument("--delta", type=float, default=0.99)
    p.set_defaults(func=_cmd_check)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        MatrixParseError,
        PrecisionError,
        SingularBasisError,
        LoopLimitError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
