"""Exact lattice arithmetic: Gram, determinants, equality, Minkowski."""
import math
import random
from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given, settings, strategies as st

from latred import (
    Basis,
    BoundReport,
    DetResult,
    QUAD,
    SingularBasisError,
    approximation_ratio,
    det_lattice,
    gram,
    minkowski_bound,
    same_lattice,
)


def naive_gram(rows):
    return tuple(
        tuple(sum(a * b for a, b in zip(r, s)) for s in rows) for r in rows
    )


def cofactor_det(m):
    """Schoolbook expansion along the first row, exact integers."""
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        total += (-1) ** j * m[0][j] * cofactor_det(minor)
    return total


def random_rows(rng, n, m, bound=40):
    return [[rng.randint(-bound, bound) for _ in range(m)] for _ in range(n)]


# -- Basis container -------------------------------------------------------


def test_basis_validation():
    with pytest.raises(ValueError):
        Basis([])
    with pytest.raises(ValueError):
        Basis([[1, 2], [3]])  # ragged
    with pytest.raises(ValueError):
        Basis([[1], [2]])  # more rows than coordinates
    with pytest.raises(ValueError):
        Basis([[]])


def test_basis_is_hashable_and_comparable():
    a = Basis([[1, 2], [3, 4]])
    b = Basis([[1, 2], [3, 4]])
    assert a == b and hash(a) == hash(b)
    assert a != Basis([[1, 2], [3, 5]])


def test_basis_shape_and_norms():
    b = Basis([[3, 4, 0], [0, 0, 2]])
    assert (b.n, b.m) == (2, 3)
    assert b.row_norm_sq(0) == 25
    assert b.max_entry_bits() == 3


# -- Gram and determinant --------------------------------------------------


@settings(max_examples=40)
@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=10**6))
def test_gram_matches_naive(n, seed):
    rng = random.Random(seed)
    rows = random_rows(rng, n, n + rng.randint(0, 2))
    assert gram(Basis(rows)) == naive_gram(rows)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=10**6))
def test_square_det_matches_cofactor_expansion(n, seed):
    rng = random.Random(seed)
    rows = random_rows(rng, n, n, bound=12)
    want = abs(cofactor_det(rows))
    if want == 0:
        with pytest.raises(SingularBasisError):
            det_lattice(Basis(rows))
        return
    got = det_lattice(Basis(rows))
    assert got.value == want
    assert not got.is_sqrt


def test_det_of_huge_entries():
    p = 2**521 - 1
    got = det_lattice(Basis([[p, 0], [12345, 1]]))
    assert got.value == p


def test_det_invariant_under_unimodular_row_ops():
    rng = random.Random(7)
    rows = random_rows(rng, 4, 4)
    base = det_lattice(Basis(rows)).value
    # add 3 * row 1 to row 0
    mixed = [list(r) for r in rows]
    mixed[0] = [a + 3 * b for a, b in zip(mixed[0], mixed[1])]
    assert det_lattice(Basis(mixed)).value == base
    # swap two rows
    mixed[1], mixed[2] = mixed[2], mixed[1]
    assert det_lattice(Basis(mixed)).value == base


def test_nonsquare_det_is_sqrt_of_gram_det():
    b = Basis([[1, 0, 2], [0, 1, 1]])
    d = det_lattice(b)
    assert d.is_sqrt and d.value == 6  # det Gram([[5,2],[2,2]]) = 6
    # sqrt marker resolves through to_mpf
    assert abs(float(d.to_mpf(QUAD)) - math.sqrt(6)) < 1e-14


def test_rank_deficient_rectangular_raises():
    with pytest.raises(SingularBasisError):
        det_lattice(Basis([[1, 2, 3], [2, 4, 6]]))


# -- lattice equality ------------------------------------------------------


def test_same_lattice_identity_and_negation():
    a = Basis([[2, 1], [0, 3]])
    assert same_lattice(a, a)
    assert same_lattice(a, Basis([[-2, -1], [0, 3]]))


def test_same_lattice_after_unimodular_transform():
    a = Basis([[4, 1, 0], [1, 3, 2], [0, 0, 5]])
    rows = [list(r) for r in a.rows]
    # elementary operations generate the unimodular group
    rows[0] = [x + 2 * y for x, y in zip(rows[0], rows[1])]
    rows[2] = [x - 7 * y for x, y in zip(rows[2], rows[0])]
    rows[1], rows[2] = rows[2], rows[1]
    rows[1] = [-x for x in rows[1]]
    assert same_lattice(a, Basis(rows))


def test_different_lattices_detected():
    a = Basis([[2, 0], [0, 2]])
    assert not same_lattice(a, Basis([[1, 0], [0, 4]]))  # same det
    assert not same_lattice(a, Basis([[2, 0], [0, 4]]))  # sublattice
    assert not same_lattice(Basis([[1, 0], [0, 1]]), a)  # superlattice


def test_same_lattice_rectangular():
    a = Basis([[1, 0, 1], [0, 1, 1]])
    b = Basis([[1, 1, 2], [0, 1, 1]])
    c = Basis([[1, 1, 2], [1, 3, 4]])
    assert same_lattice(a, b)
    assert not same_lattice(a, c)  # index-2 sublattice


def test_same_lattice_shape_mismatch():
    with pytest.raises(ValueError):
        same_lattice(Basis([[1, 0], [0, 1]]), Basis([[1, 0, 0], [0, 1, 0]]))


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_same_lattice_random_unimodular(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    rows = random_rows(rng, n, n, bound=15)
    while cofactor_det(rows) == 0:
        rows = random_rows(rng, n, n, bound=15)
    a = Basis(rows)
    t = [list(r) for r in rows]
    for _ in range(6):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            t[i] = [-x for x in t[i]]
        else:
            c = rng.randint(-3, 3)
            t[i] = [x + c * y for x, y in zip(t[i], t[j])]
    assert same_lattice(a, Basis(t))


# -- Minkowski bound -------------------------------------------------------


def test_minkowski_dimension_one_equals_det():
    assert float(minkowski_bound(1, 7, QUAD)) == 7.0


def test_minkowski_dimension_two_unit_det():
    # 2/sqrt(pi); frozen from mpmath 1.3.0: mp.dps=45; 2/sqrt(pi)
    want = "1.12837916709551257389615890312154517168810126"
    got = minkowski_bound(2, 1, QUAD)
    assert abs(got - gmpy2.mpfr(want, 113)) < gmpy2.mpfr(2, 113) ** -100


def test_minkowski_dimension_four():
    # frozen from mpmath 1.3.0: mp.dps=45; (2/sqrt(pi))*gamma(3)**0.25*2
    want = "2.68375306786165566489115875190444631773552722"
    got = minkowski_bound(4, 16, QUAD)
    assert abs(got - gmpy2.mpfr(want, 113)) < gmpy2.mpfr(2, 113) ** -99


def test_minkowski_accepts_det_result():
    d = DetResult(value=6, is_sqrt=True)
    direct = minkowski_bound(2, d, QUAD)
    # sqrt(6) fed as a plain determinant of an equivalent square lattice
    want = (2 / math.sqrt(math.pi)) * (6**0.25)
    assert abs(float(direct) - want) < 1e-13


@settings(max_examples=20)
@given(st.integers(min_value=1, max_value=8), st.integers(min_value=1, max_value=2**40))
def test_minkowski_scales_with_det_root(n, det):
    a = minkowski_bound(n, det, QUAD)
    b = minkowski_bound(n, 2**n * det, QUAD)
    # doubling every basis vector doubles the bound
    assert abs(b / a - 2) < 1e-20


def test_minkowski_rejects_bad_input():
    with pytest.raises(ValueError):
        minkowski_bound(0, 5, QUAD)
    with pytest.raises(ValueError):
        minkowski_bound(3, 0, QUAD)


# -- quality report --------------------------------------------------------


def test_approximation_ratio_report():
    b = Basis([[3, 0], [0, 4]])
    rep = approximation_ratio(b)
    assert isinstance(rep, BoundReport)
    assert float(rep.achieved_norm) == 3.0
    want = 2 / math.sqrt(math.pi) * math.sqrt(math.sqrt(144))
    assert abs(float(rep.bound) - want) < 1e-13
    assert abs(float(rep.ratio) - 3.0 / want) < 1e-13
    assert rep.met == (3.0 <= want * rep.target)
