"""After-the-fact checks that a claimed reduction is real.

Lattice equality is exact. The reduction conditions are re-derived from
a fresh QR of the claimed output at a trusted precision chosen from the
entry sizes (never below 113 bits), with a hair of slack on the
inequalities: a recomputed float cannot certify an exact tie like
|r_ij| = r_ii / 2, and rejecting those would flag correct output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import gmpy2

from .lattice import Basis, same_lattice
from .numerics import PrecisionCtx
from .qr import qr_decompose

#: Relative slack on the recomputed inequalities, far above the noise of a
#: 113-bit recompute of sane output and far below any real violation.
_SLACK = 2.0**-30


@dataclass(frozen=True)
class VerificationReport:
    lattice_unchanged: bool
    size_reduced: bool
    lovasz_holds: bool
    delta: float
    precision_bits: int

    @property
    def ok(self) -> bool:
        return self.lattice_unchanged and self.size_reduced and self.lovasz_holds


def trusted_precision(basis: Basis) -> int:
    """Enough mantissa to recompute R of this basis with headroom."""
    return max(113, basis.max_entry_bits() + 48)


def verify_reduction(
    original: Basis,
    reduced: Basis,
    delta: float = 0.99,
    precision_bits: Optional[int] = None,
) -> VerificationReport:
    """Check lattice equality plus both reduction conditions on `reduced`."""
    bits = precision_bits if precision_bits is not None else trusted_precision(reduced)
    ctx = PrecisionCtx(bits)
    unchanged = same_lattice(original, reduced)

    g = ctx.gmp
    r = qr_decompose(reduced, ctx)
    n = r.n
    size_ok = True
    half_plus = gmpy2.mpfr(0.5 * (1.0 + _SLACK), bits)
    for j in range(1, n):
        for i in range(j):
            if g.abs(r.entries[i][j]) > g.mul(half_plus, r.entries[i][i]):
                size_ok = False
                break
        if not size_ok:
            break
    lovasz_all = True
    delta_relaxed = gmpy2.mpfr(delta * (1.0 - _SLACK), bits)
    for i in range(1, n):
        rii = r.entries[i][i]
        rcross = r.entries[i - 1][i]
        rpred = r.entries[i - 1][i - 1]
        lhs = g.add(g.mul(rii, rii), g.mul(rcross, rcross))
        rhs = g.mul(delta_relaxed, g.mul(rpred, rpred))
        if lhs < rhs:
            lovasz_all = False
            break
    return VerificationReport(
        lattice_unchanged=unchanged,
        size_reduced=size_ok,
        lovasz_holds=lovasz_all,
        delta=delta,
        precision_bits=bits,
    )
