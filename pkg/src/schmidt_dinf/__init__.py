"""Finite Schmidt decompositions for bipartite (d, infinity) systems.

The finite factor is C^d; the infinite one is represented through explicit
truncations to its first n basis vectors.
"""

from .errors import (
    DimensionError,
    InvalidInput,
    InvalidProbe,
    InvalidTolerance,
    NoConvergence,
    NonFiniteEntry,
    NotNormalized,
    NumericalFailure,
    SchemaError,
    SchmidtError,
    ZeroVector,
)
from .majorization import MajorizationVerdict, locc_verdict, majorizes, prob_vector, to_prob_vector
from .mixed_pure import (
    hermitian_rotate,
    operator_schmidt,
    partial_transpose,
    ppt_test,
    separability_flags,
    witness_pairing,
    witness_test,
)
from .physics import bloch_analyze, bloch_from_overlap, dirac_analyze, dirac_conjecture_scan, gram_matrix
from .schmidt import (
    SchmidtData,
    decompose_product_sum,
    delta_matrix,
    entanglement_entropy,
    max_entangled,
    reduced_density,
    schmidt_decompose,
)
from .states import (
    MixedPureState,
    ProductSumState,
    PureState,
    assemble,
    factor_state,
    make_mixed_pure,
    make_product_sum,
    make_pure_state,
)
from .truncation import CoefficientSource, converge_schmidt, truncate, weyl_gap

__version__ = "0.1.0"
