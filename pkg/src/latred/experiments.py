"""Reproducible reduction experiments: stage profiles and precision sweeps.

Both experiments work on generated lattices named by (dimension,
bit_size, seed) triples, so a results row is reproducible from its
inputs alone. Time columns are wall-clock and vary run to run; every
other column is deterministic.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from .bkz import BKZOutcome, BKZParams, bkz_reduce
from .generator import GenSpec, generate
from .lattice import Basis
from .lll import LoopLimitError
from .numerics import DOUBLE, PrecisionCtx, PrecisionError
from .profiling import StageProfile
from .qr import orthogonality_residual, qr_decompose
from .verify import verify_reduction

PROFILE_CSV_HEADER = "dimension,beta,qr_ms,sizered_ms,enum_ms,other_ms,enum_nodes,total_ms"
SWEEP_CSV_HEADER = "dimension,mantissa_bits,residual,succeeded,bound_ratio,wall_ms"


def profile_reduction(
    basis: Basis, params: BKZParams
) -> Tuple[BKZOutcome, StageProfile]:
    """Run BKZ with stage timing; whatever is not QR, size reduction or
    enumeration lands in other_time, so the stages sum to the wall time."""
    prof = StageProfile()
    t0 = time.perf_counter()
    outcome = bkz_reduce(basis, params, profile=prof)
    prof.absorb_remainder(time.perf_counter() - t0)
    return outcome, prof


@dataclass(frozen=True)
class ProfileRow:
    dimension: int
    beta: int
    profile: StageProfile

    def csv_line(self) -> str:
        p = self.profile
        return (
            f"{self.dimension},{self.beta},{p.qr_time * 1e3:.3f},"
            f"{p.size_reduce_time * 1e3:.3f},{p.enum_time * 1e3:.3f},"
            f"{p.other_time * 1e3:.3f},{p.enum_nodes},{p.total * 1e3:.3f}"
        )


def profile_series(
    specs: Iterable[GenSpec], params: BKZParams
) -> List[Tuple[GenSpec, BKZOutcome, ProfileRow]]:
    """Profile one generated lattice per spec under the same parameters."""
    out = []
    for spec in specs:
        basis = generate(spec)
        outcome, prof = profile_reduction(basis, params)
        row = ProfileRow(dimension=spec.dimension, beta=params.beta, profile=prof)
        out.append((spec, outcome, row))
    return out


def profile_rows_to_csv(rows: Iterable[ProfileRow]) -> str:
    return "\n".join([PROFILE_CSV_HEADER] + [r.csv_line() for r in rows]) + "\n"


@dataclass(frozen=True)
class SweepRow:
    """One (lattice, precision) cell of a sweep.

    ``succeeded`` means the reduction ran to completion AND passed
    verification at trusted precision; failures are recorded, never
    raised. ``bound_ratio`` is NaN when no output basis exists.
    """

    dimension: int
    mantissa_bits: int
    residual: float
    succeeded: bool
    bound_ratio: float
    wall_ms: float

    def csv_line(self) -> str:
        return (
            f"{self.dimension},{self.mantissa_bits},{self.residual:.6e},"
            f"{str(self.succeeded).lower()},{self.bound_ratio:.6f},"
            f"{self.wall_ms:.3f}"
        )


def _sweep_cell(args) -> SweepRow:
    spec, bits, beta, delta, max_tours, max_scan_iterations = args
    ctx = PrecisionCtx(bits)
    basis = generate(spec)
    t0 = time.perf_counter()
    try:
        r = qr_decompose(basis, ctx)
        residual = float(orthogonality_residual(basis, r, ctx))
    except PrecisionError:
        residual = float("inf")  # decomposition itself refused at this width
    params = BKZParams(
        beta=beta,
        delta=delta,
        ctx=ctx,
        max_tours=max_tours,
        enum_ctx=DOUBLE,  # enumeration precision is pinned; only QR varies
        max_scan_iterations=max_scan_iterations,
    )
    succeeded = False
    ratio = float("nan")
    try:
        outcome = bkz_reduce(basis, params)
        report = verify_reduction(basis, outcome.basis, delta)
        succeeded = report.ok
        ratio = float(outcome.bound_report.ratio)
    except (PrecisionError, LoopLimitError):
        pass
    wall_ms = (time.perf_counter() - t0) * 1e3
    return SweepRow(
        dimension=spec.dimension,
        mantissa_bits=bits,
        residual=residual,
        succeeded=succeeded,
        bound_ratio=ratio,
        wall_ms=wall_ms,
    )


def precision_sweep(
    specs: Sequence[GenSpec],
    precisions: Sequence[int],
    *,
    beta: int = 20,
    delta: float = 0.99,
    max_tours: int = 40,
    max_scan_iterations: Optional[int] = None,
    jobs: int = 1,
) -> List[SweepRow]:
    """Cross every lattice with every mantissa width; never abort a cell.

    Each cell measures the QR orthogonality residual at that precision,
    then attempts a full BKZ reduction there (enumeration stays at 53
    bits) and verifies the result at trusted precision. With jobs > 1
    cells run in separate processes; ordering of the returned rows is
    (dimension, mantissa_bits) either way.
    """
    cells = [
        (spec, bits, beta, delta, max_tours, max_scan_iterations)
        for spec in specs
        for bits in precisions
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_cell, cells))
    else:
        rows = [_sweep_cell(cell) for cell in cells]
    rows.sort(key=lambda row: (row.dimension, row.mantissa_bits))
    return rows


def sweep_rows_to_csv(rows: Iterable[SweepRow]) -> str:
    return "\n".join([SWEEP_CSV_HEADER] + [r.csv_line() for r in rows]) + "\n"
