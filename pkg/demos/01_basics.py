"""Generate a lattice, look at it, and measure it.

Walks the plumbing everything else builds on: the deterministic
generator, the bracketed text format, exact determinants, and the
Minkowski first-minimum bound that quality ratios are quoted against.
Runs in well under a second.
"""

from latred import (
    GenSpec,
    approximation_ratio,
    det_lattice,
    generate,
    minkowski_bound,
    parse_basis,
    write_basis,
    QUAD,
)


def main() -> None:
    spec = GenSpec(dimension=6, seed=42)
    basis = generate(spec)

    print(f"spec: dimension={spec.dimension} seed={spec.seed} "
          f"bit_size={spec.effective_bit_size}")
    print("rows are [p, x_i, 0...] style: a prime in the corner, one")
    print("uniform residue per row, identity elsewhere:")
    print(write_basis(basis))

    # the text format round-trips exactly, whatever the entry size
    assert parse_basis(write_basis(basis)) == basis

    det = det_lattice(basis)
    print(f"|det| = {det.value}")
    print(f"prime in the corner, so the determinant is that prime: "
          f"{det.value == basis.rows[0][0]}")

    bound = minkowski_bound(basis.n, det, QUAD)
    print(f"Minkowski bound on the first minimum: {float(bound):.3f}")

    report = approximation_ratio(basis, QUAD)
    print(f"raw first row length {float(report.achieved_norm):.3e} "
          f"is {float(report.ratio):.2e} times the bound")
    print("reduction exists to pull that ratio toward (and below) 1;")
    print("see 02_lll.py and 04_bkz_quality.py")


if __name__ == "__main__":
    main()
