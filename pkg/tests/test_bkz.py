"""Block reduction: insertion plumbing, convergence, and block optimality."""
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from latred import (
    Basis,
    BKZParams,
    EnumRequest,
    GenSpec,
    LLLParams,
    LoopLimitError,
    PrecisionCtx,
    ReductionInternalError,
    SingularBasisError,
    approximation_ratio,
    bkz_reduce,
    det_lattice,
    enumerate_shortest,
    generate,
    insert_and_purge,
    lll_reduce,
    qr_decompose,
    same_lattice,
)

Q113 = PrecisionCtx(113)


def random_basis(rng, n, bound=30):
    while True:
        rows = [[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)]
        try:
            if det_lattice(Basis(rows)).value != 0:
                return Basis(rows)
        except SingularBasisError:
            continue


def exact_norm_sq(basis, coeffs):
    vec = [
        sum(c * row[t] for c, row in zip(coeffs, basis.rows))
        for t in range(basis.m)
    ]
    return sum(x * x for x in vec)


def certify_first_is_shortest(basis):
    """Exhaustive enumeration proof that no lattice vector beats row 0."""
    first = basis.row_norm_sq(0)
    r = qr_decompose(basis, Q113)
    found = enumerate_shortest(
        EnumRequest(r_block=r, radius_sq=first + 0.5, ctx=PrecisionCtx(53))
    )
    assert found is not None  # row 0 itself is inside the radius
    assert exact_norm_sq(basis, found.coeffs) == first


# -- parameter validation -------------------------------------------------------


def test_params_validation():
    with pytest.raises(ValueError):
        BKZParams(beta=1)
    with pytest.raises(ValueError):
        BKZParams(delta=0.25)
    with pytest.raises(ValueError):
        BKZParams(delta=1.01)
    with pytest.raises(ValueError):
        BKZParams(max_tours=0)
    assert BKZParams(beta=2, delta=1.0).beta == 2


def test_internal_error_is_a_runtime_error():
    assert issubclass(ReductionInternalError, RuntimeError)


# -- insertion and purge ----------------------------------------------------------


def test_inserting_an_existing_row_is_a_no_op():
    basis = Basis([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    result = insert_and_purge(basis, 0, [1], BKZParams(ctx=Q113))
    assert result.rows == basis.rows


def test_insert_difference_keeps_lattice():
    basis = Basis([[9, 1, 0, 0], [1, 8, 1, 0], [0, 1, 7, 1], [0, 0, 1, 9]])
    result = insert_and_purge(basis, 1, [1, -1], BKZParams(ctx=Q113))
    assert result.n == basis.n
    assert same_lattice(basis, result)


def test_insert_validation():
    basis = Basis([[2, 0], [0, 3]])
    params = BKZParams(ctx=Q113)
    with pytest.raises(ValueError):
        insert_and_purge(basis, -1, [1], params)
    with pytest.raises(ValueError):
        insert_and_purge(basis, 2, [1], params)
    with pytest.raises(ValueError):
        insert_and_purge(basis, 0, [], params)
    with pytest.raises(ValueError):
        insert_and_purge(basis, 0, [0, 0], params)
    with pytest.raises(ValueError):
        insert_and_purge(basis, 1, [1, 1], params)  # runs past the last row


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_insert_purge_preserves_lattice(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    basis = random_basis(rng, n, bound=20)
    k = rng.randrange(n)
    width = rng.randint(1, n - k)
    u = [rng.randint(-3, 3) for _ in range(width)]
    if not any(u):
        u[rng.randrange(width)] = 1
    result = insert_and_purge(basis, k, u, BKZParams(ctx=Q113))
    assert result.n == n
    assert same_lattice(basis, result)


def test_purge_budget_is_enforced():
    basis = generate(GenSpec(dimension=8, seed=5))
    params = BKZParams(ctx=Q113, max_scan_iterations=1)
    with pytest.raises(LoopLimitError):
        insert_and_purge(basis, 0, [3, 1, 2], params)


# -- full reduction -------------------------------------------------------------


def test_identity_converges_immediately():
    basis = Basis([[1, 0], [0, 1]])
    out = bkz_reduce(basis, BKZParams(beta=2, ctx=Q113))
    assert out.basis.rows == basis.rows
    assert out.converged
    assert out.insertions == 0
    assert out.tours == 1


def test_single_row_needs_no_tours():
    out = bkz_reduce(Basis([[3, 4]]), BKZParams(ctx=Q113))
    assert out.converged
    assert out.tours == 0
    assert out.basis.rows == ((3, 4),)


def test_full_block_size_finds_exact_shortest_small_dims():
    for n, seed in ((4, 1), (5, 2), (6, 3)):
        basis = generate(GenSpec(dimension=n, seed=seed, bit_size=10 * n))
        out = bkz_reduce(basis, BKZParams(beta=n, ctx=Q113))
        assert same_lattice(basis, out.basis)
        certify_first_is_shortest(out.basis)


def test_block_reduction_never_loses_to_plain_lll():
    basis = generate(GenSpec(dimension=14, seed=8))
    lll_out = lll_reduce(basis, LLLParams(ctx=Q113))
    bkz_out = bkz_reduce(basis, BKZParams(beta=6, ctx=Q113))
    assert bkz_out.basis.row_norm_sq(0) <= lll_out.basis.row_norm_sq(0)
    assert same_lattice(basis, bkz_out.basis)


def test_tour_norms_never_increase():
    basis = generate(GenSpec(dimension=14, seed=3))
    norms = []

    def on_tour(tour, first_norm, insertions, prof):
        norms.append(first_norm)
        assert tour == len(norms)
        assert insertions >= 0

    out = bkz_reduce(basis, BKZParams(beta=4, ctx=Q113), on_tour=on_tour)
    assert len(norms) == out.tours
    for earlier, later in zip(norms, norms[1:]):
        assert later <= earlier * (1 + 1e-12)
    assert math.isclose(
        norms[-1], math.sqrt(out.basis.row_norm_sq(0)), rel_tol=1e-9
    )


def test_tour_cap_reports_non_convergence():
    basis = generate(GenSpec(dimension=16, seed=1))
    out = bkz_reduce(basis, BKZParams(beta=4, ctx=Q113, max_tours=1))
    assert out.tours == 1
    assert not out.converged
    # even a truncated run must hand back an equivalent basis
    assert same_lattice(basis, out.basis)


def test_deterministic_for_fixed_input():
    basis = generate(GenSpec(dimension=12, seed=10))
    a = bkz_reduce(basis, BKZParams(beta=5, ctx=Q113))
    b = bkz_reduce(basis, BKZParams(beta=5, ctx=Q113))
    assert a.basis.rows == b.basis.rows
    assert (a.tours, a.insertions, a.swaps) == (b.tours, b.insertions, b.swaps)


def test_outcome_carries_consistent_bound_report():
    basis = generate(GenSpec(dimension=10, seed=4))
    out = bkz_reduce(basis, BKZParams(beta=5, ctx=Q113))
    fresh = approximation_ratio(out.basis, Q113)
    assert float(out.bound_report.ratio) == pytest.approx(
        float(fresh.ratio), rel=1e-12
    )
    assert out.bound_report.met == (float(fresh.ratio) <= fresh.target)


def test_profile_tracks_enumeration():
    basis = generate(GenSpec(dimension=12, seed=6))
    out = bkz_reduce(basis, BKZParams(beta=5, ctx=Q113))
    assert out.profile.enum_nodes > 0
    assert out.profile.enum_time > 0
    assert out.profile.qr_time > 0


@settings(max_examples=10, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_random_bases_stay_equivalent_and_get_shorter(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 6)
    basis = random_basis(rng, n)
    out = bkz_reduce(basis, BKZParams(beta=n, ctx=Q113))
    assert same_lattice(basis, out.basis)
    # at convergence the front norm is within 1/delta of the block optimum,
    # which the shortest input row can never beat
    shortest_input = min(basis.row_norm_sq(i) for i in range(n))
    assert out.basis.row_norm_sq(0) <= shortest_input / 0.99 + 1
