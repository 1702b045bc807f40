"""LLL reduction with exact integer rows and floating Gram-Schmidt data.

All basis arithmetic is exact; the R factor steering the decisions comes
from the incremental Householder engine in :mod:`latred.qr`. Size
reduction rounds at the working precision and repeats, so coefficients
far wider than the mantissa are taken off a precision-sized slice per
pass instead of failing; each pass against a refreshed column is exact,
which keeps the loop honest at any precision that can still order the
Lovasz comparisons.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import gmpy2
from gmpy2 import mpfr

from .lattice import Basis
from .numerics import PrecisionCtx, PrecisionError, QUAD
from .profiling import StageProfile
from .qr import Orthogonalizer, RFactor

_BABAI_PASS_LIMIT = 64
_KEEP_FLOAT_BITS_DIVISOR = 4  # coefficients under 2^(p/4) skip the column refresh


class LoopLimitError(RuntimeError):
    """Iteration budget ran out. ``rows`` holds the basis reached so far."""

    def __init__(self, message: str, rows):
        super().__init__(message)
        self.rows = tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class LLLParams:
    """delta in (0.25, 1], working precision, optional iteration cap."""

    delta: float = 0.99
    ctx: PrecisionCtx = QUAD
    max_iterations: Optional[int] = None

    def __post_init__(self):
        if not 0.25 < self.delta <= 1.0:
            raise ValueError(f"delta must lie in (0.25, 1], got {self.delta}")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")


@dataclass(frozen=True)
class LLLOutcome:
    basis: Basis
    r: RFactor
    swaps: int
    size_reductions: int
    iterations: int
    profile: StageProfile


def default_iteration_budget(n: int, max_entry_bits: int) -> int:
    """Generous completion bound: 10 * n^2 * input bit width."""
    return 10 * n * n * max(max_entry_bits, 1)


def _size_reduce_row(eng: Orthogonalizer, k: int, counters: dict) -> None:
    """Make |mu(k, i)| <= 1/2 for all i < k, exactly on the integer rows.

    One pass computes every rounding coefficient against the live float
    column (top row last), applies them exactly, and either trusts the
    updated column (small coefficients) or refreshes it and goes again.
    """
    g = eng.g
    prec = eng.prec
    profile = eng.profile
    half = gmpy2.mpfr("0.5")
    keep_float_bits = max(prec // _KEEP_FLOAT_BITS_DIVISOR, 2)
    for _ in range(_BABAI_PASS_LIMIT):
        eng.ensure(k)
        t0 = time.perf_counter() if profile is not None else 0.0
        col = eng.cols[k]
        updates = []
        cmax_bits = 0
        for i in range(k - 1, -1, -1):
            if eng.tiny[i]:
                continue  # noise pivot: its mu is meaningless, skip it
            mu = g.div(col[i], eng.cols[i][i])
            if not g.abs(mu) > half:  # boundary |mu| = 1/2 stays untouched
                continue
            c = int(g.rint_round(mu))  # ties round away from zero
            if c == 0:
                continue
            updates.append((i, c))
            bits = (-c if c < 0 else c).bit_length()
            if bits > cmax_bits:
                cmax_bits = bits
            cf = gmpy2.mpfr(c, prec)
            coli = eng.cols[i]
            for t in range(i + 1):
                col[t] = g.sub(col[t], g.mul(cf, coli[t]))
        if updates:
            eng.combine_rows(k, updates, keep_float=True)
            counters["size_reductions"] += len(updates)
        if profile is not None:
            profile.size_reduce_time += time.perf_counter() - t0
        if not updates:
            eng.require_sound_pivot(k)
            return
        if cmax_bits <= keep_float_bits:
            # Drift from the in-place column update is negligible.
            eng.require_sound_pivot(k)
            return
        eng.refresh_column(k)  # large shift: recompute from the exact row
    raise PrecisionError(
        f"size reduction of row {k} did not settle after "
        f"{_BABAI_PASS_LIMIT} passes at {prec} bits"
    )


def _reduction_scan(
    eng: Orthogonalizer,
    delta: mpfr,
    *,
    start: int,
    limit: int,
    max_iterations: int,
    counters: dict,
    tolerant: bool = False,
) -> int:
    """Run the size-reduce / Lovasz / swap loop over rows [0, limit).

    Returns the final limit, which shrinks when ``tolerant`` mode drops a
    row that size reduction cancelled to zero. Swaps walk the stage index
    down; completion at the limit means every adjacent pair in range
    satisfies the Lovasz condition and every row is size-reduced.
    """
    g = eng.g
    k = max(start, 1)
    while k < limit:
        counters["iterations"] += 1
        if counters["iterations"] > max_iterations:
            raise LoopLimitError(
                f"no convergence within {max_iterations} iterations at "
                f"{eng.prec} bits",
                eng.rows,
            )
        _size_reduce_row(eng, k, counters)
        if tolerant and not any(eng.rows[k]):
            eng.remove_row(k)
            counters["removed"] += 1
            limit -= 1
            continue
        rkk = eng.cols[k][k]
        rk1k = eng.cols[k][k - 1]
        rk1 = eng.cols[k - 1][k - 1]
        lhs = g.add(g.mul(rkk, rkk), g.mul(rk1k, rk1k))
        rhs = g.mul(delta, g.mul(rk1, rk1))
        if lhs < rhs:
            eng.swap_rows(k)
            counters["swaps"] += 1
            k = k - 1 if k > 1 else 1
        else:
            k += 1
    return limit


def size_reduce(basis: Basis, r: RFactor, ctx: PrecisionCtx):
    """One sweep of size reduction: columns left to right, rows bottom up.

    Returns the reduced basis and the consistently updated R factor.
    A rounding coefficient beyond 2^(precision - 4) means R can no longer
    be trusted to steer exact updates and raises :class:`PrecisionError`.
    """
    n = basis.n
    if r.n != n:
        raise ValueError("factor size does not match the basis")
    g = ctx.gmp
    prec = ctx.mantissa_bits
    half = gmpy2.mpfr("0.5")
    coeff_limit = 1 << (prec - 4)
    rows = [list(row) for row in basis.rows]
    work = [[gmpy2.mpfr(v, prec) for v in row] for row in r.entries]
    for j in range(1, n):
        for i in range(j - 1, -1, -1):
            rij = work[i][j]
            rii = work[i][i]
            if not g.abs(rij) > g.mul(half, rii):
                continue
            c = int(g.rint_round(g.div(rij, rii)))
            if c == 0:
                continue
            if c > coeff_limit or -c > coeff_limit:
                raise PrecisionError(
                    f"reduction coefficient at ({i}, {j}) needs "
                    f"{abs(c).bit_length()} bits, beyond 2^{prec - 4}; "
                    f"raise the working precision"
                )
            src = rows[i]
            rows[j] = [a - c * b for a, b in zip(rows[j], src)]
            cf = gmpy2.mpfr(c, prec)
            for t in range(i + 1):
                work[t][j] = g.sub(work[t][j], g.mul(cf, work[t][i]))
    entries = tuple(tuple(row) for row in work)
    return Basis(rows), RFactor(entries=entries, ctx=ctx)


def lovasz_ok(r: RFactor, i: int, delta: float) -> bool:
    """Lovasz condition between rows i-1 and i of the factor, 1 <= i < n."""
    if not 1 <= i < r.n:
        raise ValueError(f"index {i} out of range for n={r.n}")
    g = r.ctx.gmp
    rii = r.entries[i][i]
    rpred = r.entries[i - 1][i - 1]
    rcross = r.entries[i - 1][i]
    lhs = g.add(g.mul(rii, rii), g.mul(rcross, rcross))
    rhs = g.mul(gmpy2.mpfr(delta, r.ctx.mantissa_bits), g.mul(rpred, rpred))
    return bool(lhs >= rhs)


def lll_reduce(
    basis: Basis,
    params: Optional[LLLParams] = None,
    *,
    profile: Optional[StageProfile] = None,
) -> LLLOutcome:
    """Reduce a basis until it is size-reduced and Lovasz-ordered.

    Deterministic for a given input and parameters. Raises
    :class:`LoopLimitError` (carrying the partial rows) if the iteration
    budget runs out, and :class:`PrecisionError` when the working
    precision cannot support progress.
    """
    params = params or LLLParams()
    prof = profile if profile is not None else StageProfile()
    rows = [list(row) for row in basis.rows]
    eng = Orthogonalizer(rows, params.ctx, profile=prof)
    delta = gmpy2.mpfr(params.delta, params.ctx.mantissa_bits)
    budget = params.max_iterations or default_iteration_budget(
        basis.n, basis.max_entry_bits()
    )
    counters = {"iterations": 0, "swaps": 0, "size_reductions": 0, "removed": 0}
    _reduction_scan(
        eng,
        delta,
        start=1,
        limit=len(rows),
        max_iterations=budget,
        counters=counters,
    )
    r = eng.export_rfactor(fresh=True)
    return LLLOutcome(
        basis=Basis(rows),
        r=r,
        swaps=counters["swaps"],
        size_reductions=counters["size_reductions"],
        iterations=counters["iterations"],
        profile=prof,
    )
