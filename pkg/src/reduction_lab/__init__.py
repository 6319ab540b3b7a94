"""Finite-dimensional operator-algebra toolkit.

Decides the reduction property for concrete matrix algebras, computes
commutants, radicals, intertwiners, module complements and projection
constants, and constructs explicit similarities carrying reduction algebras
onto self-adjoint block algebras.
"""

from .algebra import (
    AlgebraBasis,
    SubspaceLattice,
    alg_of_lattice,
    bicommutant,
    commutant,
    generate_algebra,
    is_reflexive,
    radical,
    span_equal,
)
from .algebra import center_and_minimal_central_idempotents
from .errors import ReductionLabError
from .gallery import (
    Digraph,
    a_lambda,
    csl_algebra,
    digraph_algebra,
    digraph_cb_bound_check,
    digraph_rp_check,
    non_reflexive_example,
    truncated_graph_example,
)
from .linalg import (
    Subspace,
    matrix_sqrt_positive,
    operator_norm,
    polar_decompose,
    principal_angle,
    projection_onto_along,
    rank_and_range,
)
from .modules import (
    IntertwinerSpace,
    ReductionCertificate,
    Representation,
    build_hat_representation,
    has_reduction_property,
    intertwiner_symmetry_check,
    intertwiners,
    invariant,
    irreducible_decomposition,
    min_norm_module_projection,
    module_complement,
    projection_constant_estimate,
    solve_inner_derivation,
)
from .orthogonalize import (
    SimilarityReport,
    WedderburnProfile,
    dixmier_orthogonalize,
    orthogonalize_matrix_units,
    renorm_from_projection,
    similarity_bound_report,
    wedderburn_similarity,
)
from .tolerance import DEFAULT_TOL, Tolerance

__version__ = "0.1.0"
