"""Block Korkine-Zolotarev reduction: LLL plus exact SVP on sliding blocks.

Each tour walks the block start k across the basis, solves the shortest
vector problem exactly inside the projected block via enumeration, and
when the winner improves on the current front vector by the delta margin,
inserts it and lets a dependency-tolerant LLL pass squeeze the resulting
linear dependence out again (exactly one row cancels to zero and is
dropped). Tours repeat until one makes no insertion and leaves the first
vector's norm unchanged, or the tour cap is hit.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Optional

import gmpy2

from .lattice import Basis, BoundReport, approximation_ratio
from .lll import (
    LoopLimitError,
    _reduction_scan,
    default_iteration_budget,
)
from .numerics import DOUBLE, QUAD, PrecisionCtx
from .profiling import StageProfile
from .qr import Orthogonalizer, RFactor
from .enumeration import EnumRequest, _search_with_nodes


class ReductionInternalError(RuntimeError):
    """An internal consistency check failed; the result cannot be trusted."""


@dataclass(frozen=True)
class BKZParams:
    """Block size, delta, precisions and loop ceilings.

    ``ctx`` drives the QR bookkeeping; ``enum_ctx`` is the (usually lower)
    precision of enumeration arithmetic. ``max_scan_iterations`` caps each
    internal LLL scan; leave it None for the generous default budget.
    """

    beta: int = 20
    delta: float = 0.99
    ctx: PrecisionCtx = QUAD
    max_tours: int = 40
    enum_ctx: PrecisionCtx = DOUBLE
    max_scan_iterations: Optional[int] = None

    def __post_init__(self):
        if self.beta < 2:
            raise ValueError(f"beta must be at least 2, got {self.beta}")
        if not 0.25 < self.delta <= 1.0:
            raise ValueError(f"delta must lie in (0.25, 1], got {self.delta}")
        if self.max_tours < 1:
            raise ValueError("max_tours must be positive")


@dataclass(frozen=True)
class BKZOutcome:
    basis: Basis
    r: RFactor
    tours: int
    insertions: int
    converged: bool
    bound_report: BoundReport
    swaps: int
    size_reductions: int
    profile: StageProfile


def _combination(rows, k: int, u) -> list:
    width = len(rows[0])
    v = [0] * width
    for off, c in enumerate(u):
        if c:
            src = rows[k + off]
            for t in range(width):
                v[t] += c * src[t]
    return v


def _purge_inserted(eng, k: int, end: int, delta, budget: int, counters: dict) -> None:
    """LLL over the widened window until the one dependent row drops out."""
    n_before = eng.n
    eng.tolerant = True
    try:
        removed_before = counters["removed"]
        _reduction_scan(
            eng,
            delta,
            start=max(k, 1),
            limit=min(end + 1, eng.n),
            max_iterations=budget,
            counters=counters,
            tolerant=True,
        )
    finally:
        eng.tolerant = False
    dropped = counters["removed"] - removed_before
    if eng.n != n_before - 1 or dropped != 1:
        raise ReductionInternalError(
            f"block insertion should cancel exactly one row, removed {dropped}"
        )


def insert_and_purge(
    basis: Basis, k: int, u, params: Optional[BKZParams] = None
) -> Basis:
    """Insert the block combination u at position k and re-thin the basis.

    ``u`` holds integer coefficients over rows k, k+1, ...; the combined
    vector enters at position k and the now dependent set is LLL-processed
    until the redundant row cancels away. The lattice is unchanged; the
    result has the original number of rows.
    """
    params = params or BKZParams()
    n = basis.n
    if not 0 <= k < n:
        raise ValueError(f"position {k} out of range")
    u = [int(c) for c in u]
    if len(u) == 0 or k + len(u) > n:
        raise ValueError(f"{len(u)} coefficients do not fit at position {k}")
    if not any(u):
        raise ValueError("u must be nonzero")
    rows = [list(row) for row in basis.rows]
    v = _combination(rows, k, u)
    eng = Orthogonalizer(rows, params.ctx)
    eng.insert_row(k, v)
    counters = {"iterations": 0, "swaps": 0, "size_reductions": 0, "removed": 0}
    budget = params.max_scan_iterations or default_iteration_budget(
        n + 1, basis.max_entry_bits()
    )
    _purge_inserted(eng, k, k + len(u), gmpy2.mpfr(params.delta), budget, counters)
    return Basis(rows)


def bkz_reduce(
    basis: Basis,
    params: Optional[BKZParams] = None,
    *,
    on_tour: Optional[Callable] = None,
    profile: Optional[StageProfile] = None,
) -> BKZOutcome:
    """Deterministic BKZ reduction of an integer basis.

    ``on_tour(tour_index, first_norm, insertions_in_tour, profile)`` is
    called after every completed tour. A run that exhausts ``max_tours``
    returns with ``converged`` False; the basis is still LLL-reduced and
    spans the same lattice.
    """
    params = params or BKZParams()
    prof = profile if profile is not None else StageProfile()
    n = basis.n
    rows = [list(row) for row in basis.rows]
    eng = Orthogonalizer(rows, params.ctx, profile=prof)
    prec = params.ctx.mantissa_bits
    delta = gmpy2.mpfr(params.delta, prec)
    budget = params.max_scan_iterations or default_iteration_budget(
        n + 1, basis.max_entry_bits()
    )
    counters = {"iterations": 0, "swaps": 0, "size_reductions": 0, "removed": 0}

    _reduction_scan(
        eng, delta, start=1, limit=n, max_iterations=budget, counters=counters
    )
    prev_first = sum(x * x for x in rows[0])
    tours = 0
    insertions_total = 0
    converged = n <= 1
    while not converged and tours < params.max_tours:
        tour_insertions = 0
        for k in range(n - 1):
            end = min(k + params.beta, n)
            block = eng.block(k, end - k)
            radius = eng.g.mul(block.diag(0), block.diag(0))
            request = EnumRequest(
                r_block=block, radius_sq=radius, ctx=params.enum_ctx
            )
            t0 = time.perf_counter()
            found, nodes = _search_with_nodes(request)
            prof.enum_time += time.perf_counter() - t0
            prof.enum_nodes += nodes
            improves = False
            if found is not None:
                # accept only a delta-fraction improvement of the block front
                lhs = eng.g.mul(delta, radius)
                improves = bool(lhs > gmpy2.mpfr(found.norm_sq, prec))
            if improves:
                v = _combination(rows, k, found.coeffs)
                eng.insert_row(k, v)
                _purge_inserted(eng, k, end, delta, budget, counters)
                tour_insertions += 1
            else:
                # keep the prefix reduced one row past the block
                _reduction_scan(
                    eng,
                    delta,
                    start=max(k, 1),
                    limit=min(end + 1, n),
                    max_iterations=budget,
                    counters=counters,
                )
        tours += 1
        insertions_total += tour_insertions
        first = sum(x * x for x in rows[0])
        if on_tour is not None:
            on_tour(tours, math.sqrt(float(first)), tour_insertions, prof)
        if tour_insertions == 0 and first == prev_first:
            converged = True
        prev_first = first

    if n > 1:
        _reduction_scan(
            eng, delta, start=1, limit=n, max_iterations=budget, counters=counters
        )
    r = eng.export_rfactor(fresh=True)
    out_basis = Basis(rows)
    report = approximation_ratio(out_basis, params.ctx)
    return BKZOutcome(
        basis=out_basis,
        r=r,
        tours=tours,
        insertions=insertions_total,
        converged=converged,
        bound_report=report,
        swaps=counters["swaps"],
        size_reductions=counters["size_reductions"],
        profile=prof,
    )
