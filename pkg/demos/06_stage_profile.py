"""Where the time goes as dimension grows.

Profiles BKZ-20 on dims 20, 30 and 40 at one fixed working precision
and splits the wall clock into QR maintenance, size reduction,
enumeration, and everything else. At these sizes multiprecision QR
dominates, but the enumeration share climbs with dimension; push far
enough and the search takes over completely. Expect about a minute.
"""

from latred import (
    BKZParams,
    GenSpec,
    PrecisionCtx,
    profile_rows_to_csv,
    profile_series,
)


def main() -> None:
    specs = [GenSpec(dimension=n, seed=20260800) for n in (20, 30, 40)]
    params = BKZParams(beta=20, delta=0.99, ctx=PrecisionCtx(384))
    series = profile_series(specs, params)

    print(profile_rows_to_csv([row for _, _, row in series]))
    print("enumeration share of wall time:")
    for spec, _, row in series:
        share = row.profile.enum_time / row.profile.total
        print(f"  dim {spec.dimension}: {100 * share:5.2f}%  "
              f"({row.profile.enum_nodes} nodes)")


if __name__ == "__main__":
    main()
