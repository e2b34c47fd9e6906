"""Exact max-plus matrix algebra and the maximal subgroups of M_n(R, max, +)."""

from .core import (
    NEG_INF,
    TropMatrix,
    extremal_columns,
    green_relation,
    in_span,
    is_multiple,
    lift,
    mat_add,
    mat_mul,
    mat_vec,
    projectivize,
    residual_solve,
    scalar_product,
    span_equal,
    span_subset,
    to_scalar,
    vector,
)
from .errors import (
    DiagonalNotZero,
    DimensionError,
    DivergenceError,
    DoesNotCommute,
    EnumerationLimit,
    MatchFailed,
    NonUniformCycleMeans,
    NotFullRank,
    NotIdempotent,
    NotInHClass,
    TropError,
)
from .groups import (
    GroupDecomposition,
    MonomialUnit,
    PointClass,
    affine_form,
    classify_point,
    common_eigenvector,
    commuting_units,
    conjugation_diagnostic,
    decompose_unit,
    factor_hclass_element,
    gamma,
    group_structure,
    monomial_inv,
    monomial_mul,
    sigma_group,
)
from .idem import (
    FullRankReduction,
    IdempotentProfile,
    embed_full_rank,
    full_rank_reduce,
    idempotent_profile,
    is_idempotent,
    is_minplus_convex_colspace,
    lift_hclass_element,
    reduce_hclass_element,
    zero_diag_normalize,
    zero_diag_representative,
)
from .spectral import (
    CriticalStructure,
    SpectralReport,
    critical_structure,
    eigenspace_basis,
    kleene_plus,
    kleene_star,
    max_cycle_mean,
)

__version__ = "0.1.0"
