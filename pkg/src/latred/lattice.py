"""Integer lattice bases and the exact invariants attached to them.

A lattice is represented by a :class:`Basis` whose rows are the basis
vectors. Everything in this module that claims exactness (Gram matrices,
determinants, lattice equality) is computed over integers or rationals
with no floating point involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import gmpy2
from gmpy2 import mpfr, mpq, mpz

from .numerics import QUAD, PrecisionCtx, mpf_sqrt

#: Quality target carried by default in BoundReport: shortest-basis-vector
#: length at most 1.061 times the Minkowski bound.
DEFAULT_TARGET_RATIO = 1.061


class SingularBasisError(ValueError):
    """Rows of the supposed basis are linearly dependent."""


class Basis:
    """Ordered list of linearly independent integer row vectors.

    Immutable: reduction algorithms return new instances. Row independence
    is assumed rather than checked at construction (checking is as costly
    as a determinant); exact operations raise :class:`SingularBasisError`
    when they discover a dependency.
    """

    __slots__ = ("_rows",)

    def __init__(self, rows: Iterable[Iterable[int]]):
        materialized = tuple(tuple(int(x) for x in row) for row in rows)
        if not materialized:
            raise ValueError("a basis needs at least one row")
        m = len(materialized[0])
        if m == 0:
            raise ValueError("rows must have at least one entry")
        for row in materialized:
            if len(row) != m:
                raise ValueError("all rows must have equal length")
        if len(materialized) > m:
            raise ValueError(
                f"{len(materialized)} rows of length {m} cannot be independent"
            )
        self._rows = materialized

    @property
    def rows(self) -> tuple:
        return self._rows

    @property
    def n(self) -> int:
        """Number of basis vectors."""
        return len(self._rows)

    @property
    def m(self) -> int:
        """Ambient dimension (entries per row)."""
        return len(self._rows[0])

    def row_norm_sq(self, i: int) -> int:
        """Exact squared Euclidean norm of row i."""
        return sum(x * x for x in self._rows[i])

    def max_entry_bits(self) -> int:
        """bit_length of the largest-magnitude entry (0 for the zero matrix)."""
        return max((abs(x).bit_length() for row in self._rows for x in row), default=0)

    def __eq__(self, other) -> bool:
        return isinstance(other, Basis) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        if self.n * self.m <= 16 and self.max_entry_bits() <= 32:
            return f"Basis({[list(r) for r in self._rows]})"
        return f"<Basis {self.n}x{self.m}, entries up to {self.max_entry_bits()} bits>"


def gram(basis: Basis) -> tuple:
    """Exact Gram matrix B B^T as a nested tuple of ints (symmetric)."""
    zrows = [[mpz(x) for x in row] for row in basis.rows]
    n = basis.n
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        ri = zrows[i]
        for j in range(i, n):
            rj = zrows[j]
            s = mpz(0)
            for a, b in zip(ri, rj):
                s += a * b
            v = int(s)
            out[i][j] = v
            out[j][i] = v
    return tuple(tuple(row) for row in out)


def _bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of a square integer matrix. Exact."""
    n = len(matrix)
    m = [[mpz(x) for x in row] for row in matrix]
    sign = 1
    prev = mpz(1)
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot_row = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if pivot_row is None:
                return 0
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        pkk = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i = m[i]
            row_k = m[k]
            for j in range(k + 1, n):
                row_i[j] = (pkk * row_i[j] - mik * row_k[j]) // prev
            row_i[k] = mpz(0)
        prev = pkk
    return int(sign * m[n - 1][n - 1])


@dataclass(frozen=True)
class DetResult:
    """Exact lattice determinant.

    ``value`` is |det B| when the basis is square (``is_sqrt`` False), and
    det(B B^T) when it is not (``is_sqrt`` True: the determinant of the
    lattice is the square root, which is generally irrational, so the exact
    integer radicand is kept instead).
    """

    value: int
    is_sqrt: bool = False

    def to_mpf(self, ctx: PrecisionCtx) -> mpfr:
        if self.is_sqrt:
            return mpf_sqrt(self.value, ctx)
        return gmpy2.mpfr(self.value, ctx.mantissa_bits)


def det_lattice(basis: Basis) -> DetResult:
    """Exact determinant (covolume) of the lattice spanned by the rows."""
    if basis.n == basis.m:
        d = _bareiss_det(basis.rows)
        if d == 0:
            raise SingularBasisError("rows are linearly dependent")
        return DetResult(abs(d), is_sqrt=False)
    g = _bareiss_det(gram(basis))
    if g == 0:
        raise SingularBasisError("rows are linearly dependent")
    return DetResult(g, is_sqrt=True)


class _RowSpanSolver:
    """Solves u . rows = target exactly over the rationals.

    Precomputes a fraction-free echelon form of the generating rows with
    the accompanying transform, so each solve is a cheap substitution.
    """

    def __init__(self, rows: Sequence[Sequence[int]]):
        n = len(rows)
        m = len(rows[0])
        ech = [[mpq(x) for x in row] for row in rows]
        transform = [[mpq(int(i == j)) for j in range(n)] for i in range(n)]
        pivots = []
        r = 0
        for col in range(m):
            if r == n:
                break
            pivot = next((i for i in range(r, n) if ech[i][col] != 0), None)
            if pivot is None:
                continue
            ech[r], ech[pivot] = ech[pivot], ech[r]
            transform[r], transform[pivot] = transform[pivot], transform[r]
            lead = ech[r][col]
            for i in range(r + 1, n):
                f = ech[i][col] / lead
                if f:
                    erow = ech[r]
                    irow = ech[i]
                    for j in range(col, m):
                        irow[j] -= f * erow[j]
                    trow = transform[r]
                    tirow = transform[i]
                    for j in range(n):
                        tirow[j] -= f * trow[j]
            pivots.append(col)
            r += 1
        if r < n:
            raise SingularBasisError("rows are linearly dependent")
        self.n = n
        self.m = m
        self.ech = ech
        self.transform = transform
        self.pivots = pivots

    def integer_coefficients(self, target: Sequence[int]) -> Optional[tuple]:
        """Integer u with u . rows == target, or None if no such u exists."""
        w = [mpq(x) for x in target]
        cs = []
        for i, col in enumerate(self.pivots):
            c = w[col] / self.ech[i][col]
            cs.append(c)
            if c:
                erow = self.ech[i]
                for j in range(col, self.m):
                    w[j] -= c * erow[j]
        if any(w):
            return None  # outside the row span
        u = []
        for j in range(self.n):
            s = mpq(0)
            for i in range(self.n):
                ci = cs[i]
                if ci:
                    s += ci * self.transform[i][j]
            if s.denominator != 1:
                return None  # rational but not integral combination
            u.append(int(s))
        return tuple(u)


def same_lattice(basis_a: Basis, basis_b: Basis) -> bool:
    """Whether the two bases span exactly the same lattice. Fully exact.

    Both bases must have matching shape. For square bases an absolute
    determinant mismatch short-circuits to False; otherwise membership is
    checked by exact rational solves with integrality tests.
    """
    if basis_a.n != basis_b.n or basis_a.m != basis_b.m:
        raise ValueError(
            f"shape mismatch: {basis_a.n}x{basis_a.m} vs {basis_b.n}x{basis_b.m}"
        )
    if basis_a.n == basis_a.m:
        da = _bareiss_det(basis_a.rows)
        db = _bareiss_det(basis_b.rows)
        if da == 0 or db == 0:
            raise SingularBasisError("rows are linearly dependent")
        if abs(da) != abs(db):
            return False
        # equal covolume plus containment one way forces equality
        solver = _RowSpanSolver(basis_a.rows)
        return all(
            solver.integer_coefficients(row) is not None for row in basis_b.rows
        )
    solver_a = _RowSpanSolver(basis_a.rows)
    if not all(solver_a.integer_coefficients(r) is not None for r in basis_b.rows):
        return False
    solver_b = _RowSpanSolver(basis_b.rows)
    return all(solver_b.integer_coefficients(r) is not None for r in basis_a.rows)


def minkowski_bound(n: int, det: Union[int, DetResult], ctx: PrecisionCtx) -> mpfr:
    """Minkowski's bound on the shortest nonzero vector of an n-dim lattice.

        (2 / sqrt(pi)) * gamma(1 + n/2)^(1/n) * det^(1/n)

    Evaluated in log space with 32 guard bits, then rounded to ctx.
    `det` may be the exact integer determinant or a :class:`DetResult`.
    """
    if n < 1:
        raise ValueError("dimension must be positive")
    if isinstance(det, DetResult):
        value, is_sqrt = det.value, det.is_sqrt
    else:
        value, is_sqrt = int(det), False
    if value <= 0:
        raise ValueError("determinant must be positive")
    g = ctx.widened(32).gmp
    ln_det = g.log(gmpy2.mpfr(value, ctx.mantissa_bits + 32))
    if is_sqrt:
        ln_det = g.div(ln_det, 2)
    half_n = g.div(gmpy2.mpfr(n, ctx.mantissa_bits + 32), 2)
    ln_gamma, _ = g.lgamma(g.add(1, half_n))
    ln_pi = g.log(g.const_pi())
    ln_bound = g.add(
        g.sub(g.log(2), g.div(ln_pi, 2)),
        g.div(g.add(ln_gamma, ln_det), n),
    )
    return gmpy2.mpfr(g.exp(ln_bound), ctx.mantissa_bits)


@dataclass(frozen=True)
class BoundReport:
    """How the first basis vector compares against the Minkowski bound."""

    bound: mpfr
    achieved_norm: mpfr
    ratio: mpfr
    target: float = DEFAULT_TARGET_RATIO

    @property
    def met(self) -> bool:
        return bool(self.ratio <= self.target)


def approximation_ratio(
    basis: Basis, ctx: PrecisionCtx = QUAD, target: float = DEFAULT_TARGET_RATIO
) -> BoundReport:
    """Ratio of ||b_1|| to the Minkowski bound of the spanned lattice."""
    det = det_lattice(basis)
    bound = minkowski_bound(basis.n, det, ctx)
    g = ctx.widened(32).gmp
    norm = g.sqrt(gmpy2.mpfr(basis.row_norm_sq(0), ctx.mantissa_bits + 32))
    ratio = gmpy2.mpfr(g.div(norm, bound), ctx.mantissa_bits)
    return BoundReport(
        bound=bound,
        achieved_norm=gmpy2.mpfr(norm, ctx.mantissa_bits),
        ratio=ratio,
        target=target,
    )
