"""Lattice basis reduction over exact integers.

Exact basis arithmetic (Python ints), configurable-precision floating
bookkeeping (MPFR), LLL and BKZ reduction, exact shortest-vector
enumeration, seeded test lattices, and reproducible experiments.
"""

from .bkz import BKZOutcome, BKZParams, ReductionInternalError, bkz_reduce, insert_and_purge
from .enumeration import (
    EnumBudgetError,
    EnumRequest,
    EnumResult,
    brute_force_shortest,
    enumerate_shortest,
)
from .experiments import (
    ProfileRow,
    SweepRow,
    precision_sweep,
    profile_reduction,
    profile_rows_to_csv,
    profile_series,
    sweep_rows_to_csv,
)
from .generator import GenSpec, generate, is_probable_prime, splitmix64
from .lattice import (
    Basis,
    BoundReport,
    DEFAULT_TARGET_RATIO,
    DetResult,
    SingularBasisError,
    approximation_ratio,
    det_lattice,
    gram,
    minkowski_bound,
    same_lattice,
)
from .lll import (
    LLLOutcome,
    LLLParams,
    LoopLimitError,
    lll_reduce,
    lovasz_ok,
    size_reduce,
)
from .matrixio import (
    MatrixParseError,
    parse_basis,
    read_basis_file,
    write_basis,
    write_basis_file,
)
from .numerics import (
    DOUBLE,
    PrecisionCtx,
    PrecisionError,
    QUAD,
    SINGLE,
    gamma_ln,
    mpf_from_int,
    mpf_sqrt,
)
from .profiling import StageProfile
from .qr import (
    Orthogonalizer,
    QFactor,
    RFactor,
    orthogonality_residual,
    qr_decompose,
    qr_update_after_swap,
)
from .verify import VerificationReport, verify_reduction

__version__ = "0.1.0"

__all__ = [
    "BKZOutcome",
    "BKZParams",
    "Basis",
    "BoundReport",
    "DEFAULT_TARGET_RATIO",
    "DOUBLE",
    "DetResult",
    "EnumBudgetError",
    "EnumRequest",
    "EnumResult",
    "GenSpec",
    "LLLOutcome",
    "LLLParams",
    "LoopLimitError",
    "MatrixParseError",
    "Orthogonalizer",
    "PrecisionCtx",
    "PrecisionError",
    "ProfileRow",
    "QFactor",
    "QUAD",
    "RFactor",
    "ReductionInternalError",
    "SINGLE",
    "SingularBasisError",
    "StageProfile",
    "SweepRow",
    "VerificationReport",
    "approximation_ratio",
    "bkz_reduce",
    "brute_force_shortest",
    "det_lattice",
    "enumerate_shortest",
    "gamma_ln",
    "generate",
    "gram",
    "insert_and_purge",
    "is_probable_prime",
    "lll_reduce",
    "lovasz_ok",
    "minkowski_bound",
    "mpf_from_int",
    "mpf_sqrt",
    "orthogonality_residual",
    "parse_basis",
    "precision_sweep",
    "profile_reduction",
    "profile_rows_to_csv",
    "profile_series",
    "qr_decompose",
    "qr_update_after_swap",
    "read_basis_file",
    "same_lattice",
    "size_reduce",
    "splitmix64",
    "sweep_rows_to_csv",
    "verify_reduction",
    "write_basis",
    "write_basis_file",
]
