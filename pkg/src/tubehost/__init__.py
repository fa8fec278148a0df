"""Polyhedral support functions, tube semigroups V + iB(C)^0 and their commutative C*-algebras."""

from .algebra import (
    TOL_NORM,
    AlgebraElement,
    MomentumSet,
    SmoothState,
    act,
    gelfand_eval,
    half_plane_instance,
    is_bounded_character,
    l1_norm,
    momentum,
    momentum_set,
    mul,
    multiplier_eval,
    norm,
    one_param_norm,
    separation_witness,
)
from .algebra import star as star_element
from .convex import (
    TOL,
    PolyhedralCone,
    PolyhedralSet,
    b_cone,
    clip_radius,
    clipped_hausdorff_distance,
    dual_cone,
    full_space,
    hausdorff_distance,
    interior_contains,
    interior_direction,
    is_bounded,
    is_subset,
    level_set,
    minimize_linear,
    polar_contains,
    polar_inradius,
    reconstruct_from_support,
    recession_cone,
    set_equal,
    support_function,
    support_value,
    zero_cone,
)
from ._dd import N_DD
from .errors import (
    ContextMismatchError,
    DegenerateConeError,
    DimensionMismatchError,
    DomainError,
    EmptySetError,
    InvalidInputError,
    OutsideSemigroupError,
    TubeHostError,
    UnboundedBelowError,
    UnsupportedDimensionError,
)
from .sup_norm import NormBracket
from .tube import (
    AbsoluteValueContext,
    AxiomReport,
    TubePoint,
    alpha,
    check_absolute_value_axioms,
    multiply,
    one_param_point,
    star,
)

__version__ = "0.1.0"
