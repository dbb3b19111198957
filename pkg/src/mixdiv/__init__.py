"""mixdiv: mixed f-divergences for multiple pairs of measures, inequality
verification, and divergences of planar convex bodies."""

from .measures import (
    Density,
    DensityBundle,
    MeasureSpace,
    TOL_NORM,
    make_bundle,
    make_space,
    probability_density,
    validate_density,
)
from .ffunctions import (
    FFunction,
    FVector,
    adjoint,
    eval_f,
    from_spec,
    make_builtin,
    weighted_term,
)
from .divergences import (
    DivergenceReport,
    classical_f_divergence,
    ith_mixed,
    ith_mixed_reference,
    mixed_f_divergence,
    mixed_k_form,
    named_divergence,
)
from .inequalities import (
    InequalityVerdict,
    TOL_EQ,
    TOL_INEQ,
    af_check,
    concave_chain_check,
    corollary_bound_check,
    effective_proportionality,
    factor_decomposition,
    interpolation_check,
    jensen_bound_check,
)
from .falsify import FalsifyConfig, INEQUALITY_IDS, falsify
from .geometry import (
    BodyFunctionals,
    CircleGrid,
    ConvexBody2D,
    apply_linear_map,
    body_densities,
    body_eval,
    body_functionals,
    ellipse,
    isoperimetric_check,
    ith_mixed_body_divergence,
    mixed_body_divergence,
    trigball,
    unit_disk,
)

__version__ = "0.1.0"
