"""Orthogonal Latin squares, their quantum analogues, and 2-unitary searches.

The package splits into matrix reorderings and defects (linalg), finite
fields (gf), classical and quantum combinatorial designs (designs),
multipartite pure states and uniformity checks (states), the iterative
search for 2-unitary matrices (solver), JSON/CSV persistence (jsonio), and
a command-line front end (cli).
"""

from .errors import (
    CapabilityError,
    DimensionError,
    FormatError,
    InvalidDesignError,
    NotAnOlsError,
    NotAPrimePowerError,
    NumericError,
    QeulerError,
)
from .gf import Field, FieldElement, is_prime, prime_power_decompose
from .linalg import (
    MultiUnitarityReport,
    PolarFactors,
    block_dim,
    flattenings,
    multi_unitarity_check,
    partial_transpose,
    polar_decompose,
    reshuffle,
    two_unitarity_defect,
    unitarity_defect,
)
from .designs import (
    DesignReport,
    FunctionTables,
    OrthogonalArray,
    OrthogonalLatinPair,
    QuantumOrthogonalArray,
    QuantumSquare,
    Violation,
    classical_embed,
    cyclic_latin,
    mols_construct,
    oa_from_latin,
    oa_verify,
    ols_function_tables,
    ols_to_permutation,
    permutation_to_ols,
    qls_verify,
    qoa_from_qols,
    qoa_verify,
    qols_verify,
    square_from_unitary_rows,
    verify_latin,
    verify_orthogonal_pair,
)
from .states import (
    PureState,
    SchmidtDecomposition,
    UniformityReport,
    ame_check,
    ame_from_ols,
    closest_separable_distance,
    entanglement_entropy,
    k_uniform_check,
    reduced_density,
    schmidt_decompose,
    state_from_schmidt,
    state_from_two_unitary,
)
from .solver import (
    GOLDEN,
    SEED_KINDS,
    GoldenConstants,
    SearchConfig,
    SearchRun,
    SearchSummary,
    amplitude_profile,
    brute_force_permutations,
    default_base_permutation,
    multi_seed_search,
    search,
    seed_matrix,
    sinkhorn_step,
)

__version__ = "0.1.0"

__all__ = [
    "QeulerError",
    "DimensionError",
    "NumericError",
    "CapabilityError",
    "NotAPrimePowerError",
    "InvalidDesignError",
    "NotAnOlsError",
    "FormatError",
    "Field",
    "FieldElement",
    "is_prime",
    "prime_power_decompose",
    "MultiUnitarityReport",
    "PolarFactors",
    "block_dim",
    "flattenings",
    "multi_unitarity_check",
    "partial_transpose",
    "polar_decompose",
    "reshuffle",
    "two_unitarity_defect",
    "unitarity_defect",
    "DesignReport",
    "FunctionTables",
    "OrthogonalArray",
    "OrthogonalLatinPair",
    "QuantumOrthogonalArray",
    "QuantumSquare",
    "Violation",
    "classical_embed",
    "cyclic_latin",
    "mols_construct",
    "oa_from_latin",
    "oa_verify",
    "ols_function_tables",
    "ols_to_permutation",
    "permutation_to_ols",
    "qls_verify",
    "qoa_from_qols",
    "qoa_verify",
    "qols_verify",
    "square_from_unitary_rows",
    "verify_latin",
    "verify_orthogonal_pair",
    "PureState",
    "SchmidtDecomposition",
    "UniformityReport",
    "ame_check",
    "ame_from_ols",
    "closest_separable_distance",
    "entanglement_entropy",
    "k_uniform_check",
    "reduced_density",
    "schmidt_decompose",
    "state_from_schmidt",
    "state_from_two_unitary",
    "GOLDEN",
    "GoldenConstants",
    "SEED_KINDS",
    "SearchConfig",
    "SearchRun",
    "SearchSummary",
    "amplitude_profile",
    "brute_force_permutations",
    "default_base_permutation",
    "multi_seed_search",
    "search",
    "seed_matrix",
    "sinkhorn_step",
    "__version__",
]
