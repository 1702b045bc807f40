"""How much mantissa does a dim-50 reduction actually need?

Sweeps QR working precision over 53, 113, 256 and 664 bits on one
generated dim-50 lattice while the enumeration float width stays pinned
at 53 bits. Two things to watch in the table:

  * residual: departure of the computed factorization from
    orthogonality, measured on the raw basis. It falls steadily as the
    mantissa widens.
  * succeeded: whether BKZ-20 ran to completion AND the output passed
    independent verification. The narrow tiers fail fast (the
    orthogonalizer refuses to certify its pivots mid-reduction), the
    wide tiers verify cleanly with identical quality.

Expect a couple of minutes; nearly all of it is the two wide tiers.
"""

from latred import GenSpec, precision_sweep, sweep_rows_to_csv


def main() -> None:
    spec = GenSpec(dimension=50, seed=20260800)
    rows = precision_sweep([spec], (53, 113, 256, 664), beta=20, delta=0.99)
    print(sweep_rows_to_csv(rows))

    narrow = [r for r in rows if not r.succeeded]
    wide = [r for r in rows if r.succeeded]
    print(f"failed tiers: {[r.mantissa_bits for r in narrow]}")
    print(f"verified tiers: {[r.mantissa_bits for r in wide]}")
    if wide:
        best = min(r.mantissa_bits for r in wide)
        print(f"cheapest working tier here: {best} bits; quality does not "
              f"improve past it, only the arithmetic gets slower")


if __name__ == "__main__":
    main()
