"""Precision context and scalar helpers, checked against mpmath oracles."""
import fractions

import gmpy2
import pytest
from hypothesis import given, settings, strategies as st

from latred import DOUBLE, QUAD, PrecisionCtx, PrecisionError
from latred.numerics import gamma_ln, mpf, mpf_from_int, mpf_sqrt


def test_context_defaults_to_quad():
    assert PrecisionCtx().mantissa_bits == 113
    assert QUAD.mantissa_bits == 113
    assert DOUBLE.mantissa_bits == 53


def test_context_rejects_out_of_range_widths():
    with pytest.raises(ValueError):
        PrecisionCtx(23)
    with pytest.raises(ValueError):
        PrecisionCtx((1 << 26) + 1)
    with pytest.raises(ValueError):
        PrecisionCtx(0)


def test_from_digits_covers_requested_decimals():
    # 200 decimal digits need ceil(200 * log2(10)) = 665 bits
    ctx = PrecisionCtx.from_digits(200)
    assert ctx.mantissa_bits == 665
    assert PrecisionCtx.from_digits(16).mantissa_bits == 54


def test_widened_adds_bits():
    assert QUAD.widened(64).mantissa_bits == 177


def test_rounding_at_53_bits_hits_nearest_even():
    # 2^60 + 1 is one ulp past what 53 bits can hold; ties go to even
    v = mpf_from_int(2**60 + 1, DOUBLE)
    assert v == gmpy2.mpfr(2**60, 53)
    # one bit wider keeps it exact
    assert mpf_from_int(2**60 + 1, PrecisionCtx(61)) == 2**60 + 1


@given(st.integers(min_value=-(2**113) + 1, max_value=2**113 - 1))
def test_quad_roundtrip_of_113_bit_integers(x):
    assert int(mpf_from_int(x, QUAD)) == x


def test_sqrt_matches_newton_iteration_at_200_digits():
    # Oracle: Newton's method on exact fractions, x -> (x + 2/x) / 2,
    # iterated until the enclosure is far below the target precision.
    x = fractions.Fraction(3, 2)
    for _ in range(12):  # quadratic convergence: 2^12 > 700 good bits
        x = (x + 2 / x) / 2
    ctx = PrecisionCtx.from_digits(200)
    got = mpf_sqrt(mpf_from_int(2, ctx), ctx)
    # compare in exact rational arithmetic: |got - sqrt(2)| below 1 ulp
    mant, exp = got.as_mantissa_exp()
    got_frac = fractions.Fraction(int(mant)) * fractions.Fraction(2) ** int(exp)
    err = abs(got_frac - x)
    assert err < fractions.Fraction(1, 2 ** (ctx.mantissa_bits - 2))


def test_sqrt_exact_on_perfect_squares():
    for k in (1, 4, 9, 144, 2**40):
        assert mpf_sqrt(mpf_from_int(k, QUAD), QUAD) == gmpy2.isqrt(k)


def test_sqrt_rejects_negative():
    with pytest.raises(ValueError):
        mpf_sqrt(mpf(-1, QUAD), QUAD)


def test_gamma_ln_of_integers():
    # Gamma(4) = 6; frozen from mpmath 1.3.0: mp.dps=40; log(gamma(4))
    want = "1.791759469228055000812477358380702272723"
    got = gamma_ln(mpf(4, QUAD), QUAD)
    assert abs(got - gmpy2.mpfr(want, 113)) < gmpy2.mpfr(2, 113) ** -100


def test_gamma_ln_at_three_halves():
    # Gamma(3/2) = sqrt(pi)/2; frozen from mpmath 1.3.0:
    # mp.dps=40; log(sqrt(pi)/2)
    want = "-0.1207822376352452223455184457816472122519"
    got = gamma_ln(mpf(1.5, QUAD), QUAD)
    assert abs(got - gmpy2.mpfr(want, 113)) < gmpy2.mpfr(2, 113) ** -100


def test_gamma_ln_recurrence():
    # lgamma(x+1) = lgamma(x) + log x, checked across half-integers
    g = QUAD.gmp
    tol = gmpy2.mpfr(2, 113) ** -104  # a few ulp at quad precision
    x = gmpy2.mpfr("0.5", 113)
    while x < 50:
        lhs = gamma_ln(g.add(x, gmpy2.mpfr(1, 113)), QUAD)
        rhs = g.add(gamma_ln(x, QUAD), g.log(x))
        assert abs(g.sub(lhs, rhs)) <= tol * max(abs(lhs), gmpy2.mpfr(1, 113))
        x = g.add(x, gmpy2.mpfr(1, 113))


def test_gamma_ln_rejects_nonpositive():
    with pytest.raises(ValueError):
        gamma_ln(mpf(0, QUAD), QUAD)
    with pytest.raises(ValueError):
        gamma_ln(mpf(-3, QUAD), QUAD)


@settings(max_examples=30)
@given(st.integers(min_value=2, max_value=10**9))
def test_sqrt_precision_improves_with_width(k):
    # the 400-bit evaluation sits within the 200-bit error radius
    lo, hi = PrecisionCtx(200), PrecisionCtx(400)
    a = mpf_sqrt(mpf_from_int(k, lo), lo)
    b = mpf_sqrt(mpf_from_int(k, hi), hi)
    assert abs(a - b) <= abs(a) * gmpy2.mpfr(2, 400) ** -198


def test_precision_error_is_arithmetic_error():
    assert issubclass(PrecisionError, ArithmeticError)
