"""Scalar layer: exact integers plus configurable-precision binary floats.

Python ints carry all exact arithmetic (they never overflow or round).
Floating-point work goes through MPFR via gmpy2, always under an explicit
:class:`PrecisionCtx` so no result depends on ambient interpreter state.
Rounding is round-to-nearest-even throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import gmpy2
from gmpy2 import mpfr

MIN_MANTISSA_BITS = 24
MAX_MANTISSA_BITS = 1 << 26  # ~20 million decimal digits, far past any sane request

_LOG2_10 = math.log2(10.0)


class PrecisionError(ArithmeticError):
    """The working precision is too low for the requested computation."""


@lru_cache(maxsize=None)
def _gmp_context(bits: int) -> gmpy2.context:
    # One shared immutable-by-convention context per precision; cached at
    # module level (not on PrecisionCtx) so the dataclass stays picklable.
    return gmpy2.context(precision=bits)


@dataclass(frozen=True, order=True)
class PrecisionCtx:
    """A mantissa width in bits. All float operations take one explicitly.

    Use the module constants ``SINGLE`` (24), ``DOUBLE`` (53) and ``QUAD``
    (113) for the IEEE tiers, or :meth:`from_digits` to request decimal
    digits. Instances are immutable and safe to share across threads and
    processes.
    """

    mantissa_bits: int = 113

    def __post_init__(self) -> None:
        b = self.mantissa_bits
        if not isinstance(b, int):
            raise TypeError(f"mantissa_bits must be an int, got {type(b).__name__}")
        if not MIN_MANTISSA_BITS <= b <= MAX_MANTISSA_BITS:
            raise ValueError(
                f"mantissa_bits must lie in [{MIN_MANTISSA_BITS}, {MAX_MANTISSA_BITS}], got {b}"
            )

    @classmethod
    def from_digits(cls, digits: int) -> "PrecisionCtx":
        """Smallest binary precision covering `digits` decimal digits."""
        if digits < 1:
            raise ValueError("digits must be positive")
        return cls(max(MIN_MANTISSA_BITS, math.ceil(digits * _LOG2_10)))

    @property
    def gmp(self) -> gmpy2.context:
        """The gmpy2 context carrying out arithmetic at this precision."""
        return _gmp_context(self.mantissa_bits)

    def widened(self, extra_bits: int) -> "PrecisionCtx":
        """Same rounding, `extra_bits` more mantissa. For internal guard digits."""
        return PrecisionCtx(min(self.mantissa_bits + extra_bits, MAX_MANTISSA_BITS))


SINGLE = PrecisionCtx(24)
DOUBLE = PrecisionCtx(53)
QUAD = PrecisionCtx(113)


def mpf(x, ctx: PrecisionCtx) -> mpfr:
    """Convert int / float / str / mpfr to an mpfr rounded to ctx precision."""
    return gmpy2.mpfr(x, ctx.mantissa_bits)


def mpf_from_int(x: int, ctx: PrecisionCtx) -> mpfr:
    """Round an exact integer to the nearest representable float.

    Exact whenever bit_length(x) <= ctx.mantissa_bits; otherwise the result
    is the nearest-even neighbour, e.g. 2**60 + 1 at 53 bits becomes 2**60.
    """
    return gmpy2.mpfr(x, ctx.mantissa_bits)


def mpf_sqrt(x, ctx: PrecisionCtx) -> mpfr:
    """Correctly rounded square root at ctx precision. Negative input raises."""
    v = gmpy2.mpfr(x, ctx.mantissa_bits)
    if v < 0:
        raise ValueError(f"square root of negative value {v}")
    return ctx.gmp.sqrt(v)


def gamma_ln(x, ctx: PrecisionCtx) -> mpfr:
    """log of the gamma function for x > 0, correctly rounded at ctx.

    Only the positive real axis is supported; x <= 0 raises ValueError.
    """
    v = gmpy2.mpfr(x, ctx.mantissa_bits)
    if not v > 0:  # catches nan as well
        raise ValueError(f"gamma_ln requires x > 0, got {v}")
    value, sign = ctx.gmp.lgamma(v)
    # sign is the sign of gamma(x) itself, always +1 on x > 0
    return value
