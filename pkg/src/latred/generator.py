"""Seeded worst-case-style test lattices.

The construction: row 1 is (p, 0, ..., 0) for a prime p of ``bit_size``
bits, and row i > 1 is (x_i, 0, ..., 1, ..., 0) with the 1 in position i
and x_i drawn uniformly from [0, p). Such bases are dense in the sense
that makes reduction work hard, their determinant is exactly p, and the
entries dwarf any fixed mantissa once bit_size is in the hundreds.

All randomness comes from SplitMix64 seeded by the caller, so a
(dimension, bit_size, seed) triple names one lattice forever, across
machines and implementation languages. Reference outputs of the PRNG
live in tests/data/splitmix64_vectors.txt.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .lattice import Basis

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

# Witness sets making Miller-Rabin deterministic: the first 12 primes
# cover everything below 3.3 * 10^24 (so all 64-bit inputs), and testing
# the first 64 primes is overwhelming evidence for the sizes used here.
_SMALL_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _first_primes(count: int) -> tuple:
    primes = []
    candidate = 2
    while len(primes) < count:
        if all(candidate % p for p in primes):
            primes.append(candidate)
        candidate += 1
    return tuple(primes)


_LARGE_WITNESSES = _first_primes(64)


def splitmix64(seed: int) -> Iterator[int]:
    """The SplitMix64 stream for a 64-bit seed. Yields 64-bit words."""
    state = seed & _MASK64
    while True:
        state = (state + _GOLDEN) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        yield z ^ (z >> 31)


class _BitSource:
    """Big integers assembled little-word-first from a SplitMix64 stream."""

    def __init__(self, seed: int):
        self._words = splitmix64(seed)

    def take_bits(self, bits: int) -> int:
        words = (bits + 63) // 64
        value = 0
        for i in range(words):
            value |= next(self._words) << (64 * i)
        return value & ((1 << bits) - 1)

    def below(self, limit: int, bits: int) -> int:
        """Uniform draw from [0, limit) by rejection of `bits`-bit draws."""
        while True:
            value = self.take_bits(bits)
            if value < limit:
                return value


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with fixed witness sets; deterministic below 2^64."""
    if n < 2:
        return False
    for p in _SMALL_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    witnesses = _SMALL_WITNESSES if n < 1 << 64 else _LARGE_WITNESSES
    for a in witnesses:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = (x * x) % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime_at_or_above(n: int) -> int:
    """Smallest prime >= n."""
    if n <= 2:
        return 2
    candidate = n | 1
    while not is_probable_prime(candidate):
        candidate += 2
    return candidate


@dataclass(frozen=True)
class GenSpec:
    """Names one lattice: dimension, prime width in bits, and a seed.

    ``bit_size`` defaults to 10 * dimension, which keeps the entries far
    beyond double precision for any dimension worth benchmarking.
    """

    dimension: int
    seed: int
    bit_size: Optional[int] = None

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        if not 0 <= self.seed <= _MASK64:
            raise ValueError("seed must fit in 64 bits")
        if self.bit_size is not None and self.bit_size < 2:
            raise ValueError("bit_size must be at least 2")

    @property
    def effective_bit_size(self) -> int:
        return self.bit_size if self.bit_size is not None else 10 * self.dimension


def generate(spec: GenSpec) -> Basis:
    """Deterministically build the lattice named by the spec.

    Draw order is fixed: first the prime search start (a bit_size-bit odd
    number with the top bit forced), then x_2 ... x_n by rejection. The
    result has determinant exactly p.
    """
    n = spec.dimension
    bits = spec.effective_bit_size
    source = _BitSource(spec.seed)
    start = source.take_bits(bits) | (1 << (bits - 1)) | 1
    p = next_prime_at_or_above(start)
    rows = [[0] * n for _ in range(n)]
    rows[0][0] = p
    for i in range(1, n):
        rows[i][0] = source.below(p, p.bit_length())
        rows[i][i] = 1
    return Basis(rows)
