"""Householder QR over the rows of an exact integer matrix.

The decomposition treats basis rows as the columns of A = B^T, so
A = Q R with Q's columns orthonormal and R upper triangular with positive
diagonal: r[i][i] is the length of the component of row i orthogonal to
all earlier rows, and r[i][j]/r[i][i] is the Gram-Schmidt coefficient
mu(j, i). All floating arithmetic runs at an explicit PrecisionCtx.

The module-level functions cover one-shot use. Reduction algorithms keep
an :class:`Orthogonalizer` alive instead: it caches one reflector per
column and recomputes only the columns invalidated by a row edit or swap.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import gmpy2
from gmpy2 import mpfr

from .lattice import Basis, SingularBasisError, gram
from .numerics import PrecisionCtx, PrecisionError
from .profiling import StageProfile


@dataclass(frozen=True)
class RFactor:
    """Upper-triangular factor with strictly positive diagonal."""

    entries: tuple  # n x n nested tuple of mpfr, zero below the diagonal
    ctx: PrecisionCtx

    @property
    def n(self) -> int:
        return len(self.entries)

    def diag(self, i: int) -> mpfr:
        return self.entries[i][i]

    def mu(self, j: int, i: int) -> mpfr:
        """Gram-Schmidt coefficient of row j against row i (i < j)."""
        return self.ctx.gmp.div(self.entries[i][j], self.entries[i][i])

    def block(self, start: int, size: int) -> "RFactor":
        """The size x size diagonal sub-factor starting at `start`."""
        if not (0 <= start and size >= 1 and start + size <= self.n):
            raise ValueError(f"block [{start}, {start + size}) out of range")
        sub = tuple(
            tuple(self.entries[i][j] for j in range(start, start + size))
            for i in range(start, start + size)
        )
        return RFactor(entries=sub, ctx=self.ctx)


@dataclass(frozen=True)
class QFactor:
    """The m x n orthonormal factor, stored row-major."""

    entries: tuple  # m rows, n columns of mpfr
    ctx: PrecisionCtx

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries[0])

    def max_defect(self) -> mpfr:
        """max |(Q^T Q - I)[i][j]|, computed at the factor's own precision."""
        g = self.ctx.gmp
        cols = list(zip(*self.entries))
        worst = gmpy2.mpfr(0, self.ctx.mantissa_bits)
        for i in range(self.n):
            for j in range(i, self.n):
                s = gmpy2.mpfr(0, self.ctx.mantissa_bits)
                for a, b in zip(cols[i], cols[j]):
                    s = g.fma(a, b, s)
                d = g.abs(g.sub(s, 1) if i == j else s)
                if d > worst:
                    worst = d
        return worst


class Orthogonalizer:
    """Incremental Householder QR bound to a live list of integer rows.

    ``rows`` is shared with the caller and must only be changed through
    the mutating methods here, which know what to invalidate. Column j's
    cached data is the transformed column (signed pivot at index j), the
    reflector tail, and a cancellation floor used to tell noise pivots
    from genuinely small ones.

    With ``tolerant=True`` a vanishing pivot sets a flag instead of
    raising, which is what dependency-removing reduction needs.
    """

    def __init__(
        self,
        rows: List[List[int]],
        ctx: PrecisionCtx,
        profile: Optional[StageProfile] = None,
        tolerant: bool = False,
    ):
        if not rows:
            raise ValueError("need at least one row")
        self.rows = rows
        self.ctx = ctx
        self.g = ctx.gmp
        self.prec = ctx.mantissa_bits
        self.m = len(rows[0])
        self.profile = profile
        self.tolerant = tolerant
        self._zero = gmpy2.mpfr(0, self.prec)
        # Rounding noise in a pivot is bounded by (cancellation floor) *
        # 2^-p times the number of fused updates feeding one entry, but
        # the observed accumulation is a random walk far below that; a
        # few guard bits over 2^-p separate dead pivots from marginal
        # ones without condemning workable precisions.
        self._floor_scale = self.g.exp2(4 - self.prec)
        self.cols: List[List[mpfr]] = []  # cols[j][0..j], signed pivot at [j]
        self.tiny: List[bool] = []
        self._vs: List[List[mpfr]] = []  # reflector tails, length m - j
        self._taus: List[mpfr] = []
        self._vmax: List[mpfr] = []  # max |v[1:]| per reflector

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def valid(self) -> int:
        return len(self.cols)

    # -- cache maintenance -------------------------------------------------

    def invalidate_from(self, j: int) -> None:
        del self.cols[j:]
        del self.tiny[j:]
        del self._vs[j:]
        del self._taus[j:]
        del self._vmax[j:]

    def ensure(self, upto: int) -> None:
        """Make columns 0..upto valid."""
        while self.valid <= upto:
            self._push_column(self.valid)

    def refresh_column(self, j: int) -> None:
        """Recompute column j from the exact row, keeping earlier columns."""
        if self.valid > j:
            self.invalidate_from(j)
        self.ensure(j)

    def require_sound_pivot(self, k: int) -> None:
        """Confirm the pivot of a size-reduced row rises above the noise.

        Only meaningful once row k has settled: a freshly combined row is
        at its local scale, so a recomputed cancellation floor measures the
        error actually present rather than the transient magnitudes of the
        Babai passes that got it there. A flag that survives the refresh
        means the pivot really is buried; strict mode refuses to go on.
        """
        if not self.tiny[k]:
            return
        self.refresh_column(k)
        if not self.tiny[k] or self.tolerant:
            return
        raise PrecisionError(
            f"pivot of column {k} lost to cancellation at "
            f"{self.prec} bits; raise the working precision"
        )

    # -- row mutations -----------------------------------------------------

    def swap_rows(self, k: int) -> None:
        """Swap rows k-1 and k."""
        self.rows[k - 1], self.rows[k] = self.rows[k], self.rows[k - 1]
        self.invalidate_from(k - 1)

    def combine_rows(
        self, k: int, updates: Sequence[Tuple[int, int]], keep_float: bool = False
    ) -> None:
        """row k -= sum(c * row i) exactly.

        By default column k onward is invalidated. ``keep_float`` skips
        that for callers who have already applied the same combination to
        the cached float column: size reduction leaves the orthogonal
        component of row k untouched, so reflector k stays valid up to
        rounding drift bounded by the caller's coefficient-size policy.
        """
        row = self.rows[k]
        for i, c in updates:
            src = self.rows[i]
            row = [a - c * b for a, b in zip(row, src)]
        self.rows[k] = row
        if not keep_float:
            self.invalidate_from(min(k, self.valid))

    def insert_row(self, k: int, row: List[int]) -> None:
        self.rows.insert(k, row)
        self.invalidate_from(k)

    def remove_row(self, k: int) -> None:
        del self.rows[k]
        self.invalidate_from(k)

    # -- the actual numerics ----------------------------------------------

    def _push_column(self, j: int) -> None:
        t0 = time.perf_counter() if self.profile is not None else 0.0
        g = self.g
        prec = self.prec
        a = [gmpy2.mpfr(x, prec) for x in self.rows[j]]
        floor = self._zero
        for i in range(j):
            v = self._vs[i]
            tau = self._taus[i]
            # s = tau * <v, a[i:]>
            s = self._zero
            for vt, at in zip(v, a[i:]):
                s = g.fma(vt, at, s)
            t = g.mul(tau, s)
            if t:
                # bare -x / abs(x) would reround through the thread
                # context (53 bits); the ctx methods stay at full width
                hit = g.mul(g.abs(t), self._vmax[i])
                if hit > floor:
                    floor = hit
                nt = g.minus(t)
                for off, vt in enumerate(v):
                    a[i + off] = g.fma(nt, vt, a[i + off])
        tail = a[j:]
        norm_sq = self._zero
        for x in tail:
            norm_sq = g.fma(x, x, norm_sq)
        pivot_mag = g.sqrt(norm_sq)
        is_tiny = pivot_mag <= g.mul(floor, self._floor_scale)
        if is_tiny and not self.tolerant and pivot_mag == 0 and floor == 0:
            # No reflector moved anything and the tail vanished exactly:
            # this is structural, not a rounding artifact.
            if self.profile is not None:
                self.profile.qr_time += time.perf_counter() - t0
            if not any(self.rows[j]):
                raise SingularBasisError(f"row {j} is zero")
            raise SingularBasisError(f"row {j} depends on earlier rows")
        # Householder reflector on the tail: moves tail onto -sign(tail0)*e0,
        # so the stored pivot keeps the sign opposite to tail[0].
        if pivot_mag == 0:
            vs: List[mpfr] = [self._zero] * len(tail)
            tau = self._zero
            vmax = self._zero
            col = a[: j + 1]
            # with more rows than coordinates the transformed column runs
            # out at m entries; the extra positions are structurally zero
            while len(col) <= j:
                col.append(self._zero)
            col[j] = self._zero
        else:
            alpha = g.minus(pivot_mag) if tail[0] >= 0 else pivot_mag
            v0 = g.sub(tail[0], alpha)
            vs = [v0] + tail[1:]
            # H a = a - tau (v . a) v with unnormalized v needs
            # tau = 2 / (v . v) = -1 / (alpha v0)
            tau = g.div(-1, g.mul(alpha, v0))
            vmax = self._zero
            for x in tail[1:]:
                ax = g.abs(x)
                if ax > vmax:
                    vmax = ax
            col = a[: j + 1]
            col[j] = gmpy2.mpfr(alpha, prec)
        self.cols.append(col)
        self.tiny.append(bool(is_tiny))
        self._vs.append(vs)
        self._taus.append(tau)
        self._vmax.append(vmax)
        if self.profile is not None:
            self.profile.qr_time += time.perf_counter() - t0

    # -- views --------------------------------------------------------------

    def pivot(self, j: int) -> mpfr:
        """Signed diagonal entry of column j (columns must be valid)."""
        return self.cols[j][j]

    def pivot_sq(self, j: int) -> mpfr:
        p = self.cols[j][j]
        return self.g.mul(p, p)

    def mu(self, j: int, i: int) -> mpfr:
        """Gram-Schmidt coefficient of row j against row i (signs cancel)."""
        return self.g.div(self.cols[j][i], self.cols[i][i])

    def export_rfactor(self, fresh: bool = True) -> RFactor:
        """Positive-diagonal RFactor for the current rows.

        With ``fresh`` (the default) every column is recomputed from the
        exact rows first, discarding drift from incremental float updates.
        """
        if fresh:
            self.invalidate_from(0)
        self.ensure(self.n - 1)
        return self._export_block(0, self.n)

    def _export_block(self, start: int, size: int) -> RFactor:
        if not self.tolerant:
            for i in range(start, start + size):
                if self.tiny[i]:
                    raise PrecisionError(
                        f"pivot of column {i} lost to cancellation at "
                        f"{self.prec} bits; raise the working precision"
                    )
        zero = self._zero
        g = self.g
        signs = [
            -1 if self.cols[i][i] < 0 else 1 for i in range(start, start + size)
        ]
        entries = []
        for bi, i in enumerate(range(start, start + size)):
            row = []
            for j in range(start, start + size):
                if j < i:
                    row.append(zero)
                else:
                    v = self.cols[j][i]
                    row.append(g.minus(v) if signs[bi] < 0 else v)
            entries.append(tuple(row))
        return RFactor(entries=tuple(entries), ctx=self.ctx)

    def block(self, start: int, size: int) -> RFactor:
        """Positive-diagonal sub-factor over rows [start, start+size)."""
        self.ensure(start + size - 1)
        return self._export_block(start, size)


def qr_decompose(
    basis: Basis, ctx: PrecisionCtx, want_q: bool = False
) -> Union[RFactor, Tuple[RFactor, QFactor]]:
    """One-shot QR of a basis. Returns R, or (R, Q) when want_q is set.

    Raises :class:`PrecisionError` when a pivot drowns in cancellation
    noise at this precision, :class:`SingularBasisError` when rows are
    exactly dependent.
    """
    eng = Orthogonalizer([list(r) for r in basis.rows], ctx)
    eng.ensure(basis.n - 1)
    r = eng.export_rfactor(fresh=False)
    if not want_q:
        return r
    q = _assemble_q(eng)
    return r, q


def _assemble_q(eng: Orthogonalizer) -> QFactor:
    """Apply the cached reflectors to the identity, column by column."""
    g = eng.g
    prec = eng.prec
    n = eng.n
    m = eng.m
    cols = []
    for j in range(n):
        # Q e_j = H_0 ... H_{n-1} e_j (reflectors applied in reverse)
        e = [gmpy2.mpfr(0, prec) for _ in range(m)]
        e[j] = gmpy2.mpfr(1, prec)
        for i in range(n - 1, -1, -1):
            v = eng._vs[i]
            tau = eng._taus[i]
            if not tau:
                continue
            s = gmpy2.mpfr(0, prec)
            for vt, et in zip(v, e[i:]):
                s = g.fma(vt, et, s)
            t = g.mul(tau, s)
            if t:
                nt = g.minus(t)
                for off, vt in enumerate(v):
                    e[i + off] = g.fma(nt, vt, e[i + off])
        # match the exported positive-diagonal R: flip where pivot is negative
        if eng.cols[j][j] < 0:
            e = [g.minus(x) for x in e]
        cols.append(e)
    rows = tuple(tuple(cols[j][i] for j in range(n)) for i in range(m))
    return QFactor(entries=rows, ctx=eng.ctx)


def orthogonality_residual(basis: Basis, r: RFactor, ctx: PrecisionCtx) -> mpfr:
    """max |Gram(B) - R^T R| / max |Gram(B)|, a scale-free accuracy gauge.

    The comparison itself runs at double working precision plus guard bits
    so it measures the factor, not the measurement.
    """
    if r.n != basis.n:
        raise ValueError("factor size does not match the basis")
    wide = PrecisionCtx(min(2 * ctx.mantissa_bits + 64, 1 << 26))
    g = wide.gmp
    gm = gram(basis)
    n = basis.n
    gmax = max(abs(gm[i][j]) for i in range(n) for j in range(n))
    if gmax == 0:
        raise ValueError("zero basis has no meaningful residual")
    rw = [
        [gmpy2.mpfr(r.entries[i][j], wide.mantissa_bits) for j in range(n)]
        for i in range(n)
    ]
    worst = gmpy2.mpfr(0, wide.mantissa_bits)
    for i in range(n):
        for j in range(i, n):
            s = gmpy2.mpfr(0, wide.mantissa_bits)
            for k in range(min(i, j) + 1):
                s = g.fma(rw[k][i], rw[k][j], s)
            d = g.abs(g.sub(s, gmpy2.mpfr(gm[i][j], wide.mantissa_bits)))
            if d > worst:
                worst = d
    out = g.div(worst, gmpy2.mpfr(gmax, wide.mantissa_bits))
    return gmpy2.mpfr(out, ctx.mantissa_bits)


def qr_update_after_swap(r: RFactor, i: int, ctx: PrecisionCtx) -> RFactor:
    """R for the basis with rows i and i+1 swapped, via one Givens rotation.

    Cheaper than re-decomposing and agrees with it to rounding error.
    """
    n = r.n
    if not 0 <= i < n - 1:
        raise ValueError(f"swap index {i} out of range for n={n}")
    g = ctx.gmp
    prec = ctx.mantissa_bits
    work = [[gmpy2.mpfr(v, prec) for v in row] for row in r.entries]
    # swap columns i and i+1, leaving a subdiagonal bump at (i+1, i)
    for row in work:
        row[i], row[i + 1] = row[i + 1], row[i]
    a = work[i][i]
    b = work[i + 1][i]
    h = g.hypot(a, b)
    if h == 0:
        raise SingularBasisError("zero pivot pair during swap update")
    c = g.div(a, h)
    s = g.div(b, h)
    for j in range(i, n):
        x = work[i][j]
        y = work[i + 1][j]
        work[i][j] = g.add(g.mul(c, x), g.mul(s, y))
        work[i + 1][j] = g.sub(g.mul(c, y), g.mul(s, x))
    work[i][i] = h
    work[i + 1][i] = gmpy2.mpfr(0, prec)
    for k in (i, i + 1):
        if work[k][k] < 0:
            work[k] = [g.minus(v) for v in work[k]]
    zero = gmpy2.mpfr(0, prec)
    entries = tuple(
        tuple(work[a_][b_] if b_ >= a_ else zero for b_ in range(n))
        for a_ in range(n)
    )
    return RFactor(entries=entries, ctx=ctx)
