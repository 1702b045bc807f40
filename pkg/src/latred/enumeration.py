"""Exact shortest-vector search inside a block of an R factor.

Coefficient vectors u are walked depth-first over the levels of the
triangular factor; at each level the candidate integers spiral outward
from the real-valued center (nearest first), so subtrees are visited in
order of increasing partial norm and pruning is tight. The search radius
is strict: a vector is returned only if its squared norm is strictly
below ``radius_sq``. Among equal-norm minimizers the canonical one is
returned: negate so the first nonzero coefficient is positive, then take
the lexicographically smallest.

Floating accumulation runs at the precision of the request; with the
default 53-bit context native machine doubles are used, which round
identically. Given the same request the node count and the result are
bit-for-bit reproducible.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import gmpy2

from .lattice import Basis
from .numerics import DOUBLE, PrecisionCtx
from .qr import RFactor

#: Refuse brute-force boxes beyond this many points.
BRUTE_FORCE_POINT_LIMIT = 1_000_000_000


@dataclass(frozen=True)
class EnumRequest:
    """A block to search, a strict squared radius, and a float precision."""

    r_block: RFactor
    radius_sq: object  # int, float or mpfr; must be positive
    ctx: PrecisionCtx = DOUBLE


@dataclass(frozen=True)
class EnumResult:
    """Canonical minimizer: coefficients, squared norm, nodes examined."""

    coeffs: Tuple[int, ...]
    norm_sq: object
    nodes_visited: int


class EnumBudgetError(RuntimeError):
    """Node budget ran out. ``best`` holds the best result seen, if any."""

    def __init__(self, message: str, best: Optional[EnumResult]):
        super().__init__(message)
        self.best = best


def _canonical(u: List[int]) -> Tuple[int, ...]:
    for x in u:
        if x > 0:
            return tuple(u)
        if x < 0:
            return tuple(-y for y in u)
    return tuple(u)  # all zero; callers never store this


def _search(
    rmat: List[List],
    radius,
    *,
    zigzag: bool,
    node_budget: Optional[int],
    rnd,
    sqrt_,
) -> Tuple[Optional[Tuple[int, ...]], object, int]:
    """Depth-first search over one carrier type (float or mpfr).

    Returns (canonical coeffs or None, best squared norm, nodes).
    All entries of rmat, and radius, must already be carrier scalars.
    """
    beta = len(rmat)
    zero = radius - radius
    # ratios q[i][j] = r_ij / r_ii and squared diagonals
    q = [[rmat[i][j] / rmat[i][i] for j in range(beta)] for i in range(beta)]
    d = [rmat[i][i] * rmat[i][i] for i in range(beta)]

    bound = radius
    best_u: Optional[Tuple[int, ...]] = None
    best_norm = None
    nodes = 0

    u = [0] * beta
    center = [zero] * beta
    rho = [zero] * (beta + 1)  # rho[i]: norm contribution of levels >= i
    # zigzag state
    next_up = [0] * beta
    next_dn = [0] * beta
    up_dead = [False] * beta
    dn_dead = [False] * beta
    on_base = [False] * beta  # current candidate is the rounded center
    side_up = [False] * beta  # current candidate came from the up side
    hi = [0] * beta  # ascending-order state

    def open_level(i: int) -> bool:
        """Set up level i under the current u[i+1:]. False if no candidates."""
        c = zero
        qi = q[i]
        for j in range(i + 1, beta):
            uj = u[j]
            if uj:
                c = c - qi[j] * uj
        center[i] = c
        if zigzag:
            b = rnd(c)
            u[i] = b
            next_up[i] = b + 1
            next_dn[i] = b - 1
            up_dead[i] = dn_dead[i] = False
            on_base[i] = True
            return True
        # ascending order: scan the whole admissible interval left to right,
        # padded a step each way so boundary rounding can never clip it
        margin = bound - rho[i + 1]
        if margin < 0:
            return False
        s = sqrt_(margin / d[i])
        lo = rnd(c - s) - 1
        hi[i] = rnd(c + s) + 1
        u[i] = lo
        on_base[i] = False
        return True

    def next_candidate(i: int) -> bool:
        """Move level i to its next untried integer. False when exhausted."""
        if not zigzag:
            if u[i] >= hi[i]:
                return False
            u[i] += 1
            return True
        if on_base[i]:
            on_base[i] = False
        if up_dead[i] and dn_dead[i]:
            return False
        if up_dead[i]:
            take_up = False
        elif dn_dead[i]:
            take_up = True
        else:
            c = center[i]
            take_up = (next_up[i] - c) <= (c - next_dn[i])
        if take_up:
            u[i] = next_up[i]
            next_up[i] += 1
        else:
            u[i] = next_dn[i]
            next_dn[i] -= 1
        side_up[i] = take_up
        return True

    def kill_current_side(i: int) -> None:
        # contributions grow with distance from the center, so one failed
        # candidate on a side finishes that whole side
        if on_base[i]:
            up_dead[i] = dn_dead[i] = True
        elif side_up[i]:
            up_dead[i] = True
        else:
            dn_dead[i] = True

    i = beta - 1
    if not open_level(i):
        return None, bound, 0
    while True:
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            raise _budget_stop(best_u, best_norm, nodes)
        diff = u[i] - center[i]
        val = rho[i + 1] + d[i] * diff * diff
        accept = val < bound or (best_u is not None and val == bound)
        if accept:
            if i > 0:
                rho[i] = val
                i -= 1
                if open_level(i):
                    continue
                # ascending order can open an empty interval; treat as a
                # dead end and resume one level up
                i += 1
            else:
                if any(u):
                    cand = _canonical(u)
                    if val < bound:
                        best_u = cand
                        best_norm = val
                        bound = val
                    elif cand < best_u:
                        best_u = cand
        elif zigzag:
            kill_current_side(i)
        # next candidate here, or climb until a level still has one
        while not next_candidate(i):
            i += 1
            if i == beta:
                return best_u, (best_norm if best_u is not None else bound), nodes


def _budget_stop(best_u, best_norm, nodes) -> EnumBudgetError:
    best = None
    if best_u is not None:
        best = EnumResult(coeffs=best_u, norm_sq=best_norm, nodes_visited=nodes)
    return EnumBudgetError(f"node budget exhausted after {nodes} nodes", best)


def _float_round(c: float) -> int:
    return int(math.floor(c + 0.5))


def _mpfr_round(c) -> int:
    return int(gmpy2.floor(c + gmpy2.mpfr("0.5")))


def _search_with_nodes(
    request: EnumRequest,
    *,
    order: str = "zigzag",
    node_budget: Optional[int] = None,
) -> Tuple[Optional[EnumResult], int]:
    """Like enumerate_shortest, but the node count survives a None result."""
    if order not in ("zigzag", "ascending"):
        raise ValueError(f"unknown ordering {order!r}")
    r = request.r_block
    beta = r.n
    bits = request.ctx.mantissa_bits
    for i in range(beta):
        if not r.entries[i][i] > 0:
            raise ValueError(f"R diagonal entry {i} is not positive")

    use_float = False
    if bits == 53:
        # native doubles round identically to 53-bit mpfr but can overflow;
        # take the fast path only when everything fits comfortably
        fmax = max(abs(float(v)) for row in r.entries for v in row)
        fmin = min(float(r.entries[i][i]) for i in range(beta))
        frad = abs(float(request.radius_sq))
        # a tiny pivot makes mu = r_ij / r_ii overflow inside the search
        use_float = (
            math.isfinite(fmax)
            and math.isfinite(frad)
            and fmax < 2.0**500
            and fmin > 2.0**-500
        )

    if use_float:
        rmat = [[float(v) for v in row] for row in r.entries]
        radius = float(request.radius_sq)
        if not radius > 0:
            raise ValueError("radius_sq must be positive")
        coeffs, norm, nodes = _search(
            rmat,
            radius,
            zigzag=(order == "zigzag"),
            node_budget=node_budget,
            rnd=_float_round,
            sqrt_=math.sqrt,
        )
    else:
        with gmpy2.context(precision=bits):
            rmat = [[gmpy2.mpfr(v, bits) for v in row] for row in r.entries]
            radius = gmpy2.mpfr(request.radius_sq, bits)
            if not radius > 0:
                raise ValueError("radius_sq must be positive")
            coeffs, norm, nodes = _search(
                rmat,
                radius,
                zigzag=(order == "zigzag"),
                node_budget=node_budget,
                rnd=_mpfr_round,
                sqrt_=gmpy2.sqrt,
            )
    if coeffs is None:
        return None, nodes
    return EnumResult(coeffs=coeffs, norm_sq=norm, nodes_visited=nodes), nodes


def enumerate_shortest(
    request: EnumRequest,
    *,
    order: str = "zigzag",
    node_budget: Optional[int] = None,
) -> Optional[EnumResult]:
    """Shortest nonzero vector of the block, or None if none beats the radius.

    ``order`` selects the candidate ordering per level: "zigzag" (default,
    nearest-to-center first) or "ascending" (plain interval sweep; same
    answer, more nodes). A ``node_budget`` turns a runaway search into an
    :class:`EnumBudgetError` carrying the best result found so far.
    """
    result, _ = _search_with_nodes(request, order=order, node_budget=node_budget)
    return result


def _exact_norm_sq(rows, u) -> int:
    m = len(rows[0])
    acc = [0] * m
    for c, row in zip(u, rows):
        if c:
            for t in range(m):
                acc[t] += c * row[t]
    return sum(x * x for x in acc)


def brute_force_shortest(basis: Basis, coeff_bound: int) -> EnumResult:
    """Exhaustive shortest vector over |u_i| <= coeff_bound. Exact.

    Independent of the enumeration machinery: combinations are evaluated
    directly from the integer rows (vectorized in float64 when everything
    provably fits, otherwise in exact integers). The minimizer is only the
    true shortest vector if it lies inside the box; that is the caller's
    obligation. Boxes beyond ``BRUTE_FORCE_POINT_LIMIT`` points are refused.
    """
    if coeff_bound < 1:
        raise ValueError("coeff_bound must be at least 1")
    n, m = basis.n, basis.m
    width = 2 * coeff_bound + 1
    points = width**n
    if points > BRUTE_FORCE_POINT_LIMIT:
        raise ValueError(
            f"{points} points exceed the brute-force limit of "
            f"{BRUTE_FORCE_POINT_LIMIT}"
        )

    # scan the half box u_1 >= 0: it contains a representative of every
    # +-pair of minimizers, and the zero-vector plane is filtered by norm
    max_entry = max((abs(x) for row in basis.rows for x in row), default=0)
    coord_cap = n * coeff_bound * max_entry
    if m * coord_cap * coord_cap < 2**53:
        return _brute_force_numpy(basis, coeff_bound)
    return _brute_force_exact(basis, coeff_bound)


def _brute_force_numpy(basis: Basis, b: int) -> EnumResult:
    import numpy as np

    n, m = basis.n, basis.m
    rows = np.array(basis.rows, dtype=np.float64)
    rng = range(-b, b + 1)
    if n == 1:
        best_u = (1,)
        best = basis.row_norm_sq(0)
        return EnumResult(coeffs=best_u, norm_sq=best, nodes_visited=b)

    width = 2 * b + 1
    d_in = 1
    while d_in < n - 1 and width ** (d_in + 1) <= 200_000:
        d_in += 1
    d_out = n - d_in
    inner = np.array(list(itertools.product(rng, repeat=d_in)), dtype=np.float64)
    inner_vecs = inner @ rows[d_out:]

    best_norm: Optional[int] = None
    cands: List[Tuple[int, ...]] = []
    nodes = 0
    outer_iter = itertools.product(range(0, b + 1), *[rng] * (d_out - 1))
    for combo in outer_iter:
        base = np.zeros(m)
        for c, row in zip(combo, rows[:d_out]):
            if c:
                base += c * row
        pts = inner_vecs + base
        norms = np.einsum("ij,ij->i", pts, pts)
        nodes += norms.shape[0]
        norms[norms == 0] = np.inf  # the zero vector never competes
        mn = norms.min()
        if not np.isfinite(mn):
            continue
        mn_int = int(mn)
        if best_norm is None or mn_int < best_norm:
            best_norm = mn_int
            cands = []
        if mn_int == best_norm:
            for idx in np.nonzero(norms == mn)[0]:
                u = combo + tuple(int(x) for x in inner[idx])
                cands.append(_canonical(list(u)))
    assert best_norm is not None and cands
    return EnumResult(coeffs=min(cands), norm_sq=best_norm, nodes_visited=nodes)


def _brute_force_exact(basis: Basis, b: int) -> EnumResult:
    n = basis.n
    rng = range(-b, b + 1)
    best_norm: Optional[int] = None
    cands: List[Tuple[int, ...]] = []
    nodes = 0
    rows = basis.rows
    for combo in itertools.product(range(0, b + 1), *[rng] * (n - 1)):
        nodes += 1
        if not any(combo):
            continue
        norm = _exact_norm_sq(rows, combo)
        if best_norm is None or norm < best_norm:
            best_norm = norm
            cands = [_canonical(list(combo))]
        elif norm == best_norm:
            cands.append(_canonical(list(combo)))
    assert best_norm is not None
    return EnumResult(coeffs=min(cands), norm_sq=best_norm, nodes_visited=nodes)
