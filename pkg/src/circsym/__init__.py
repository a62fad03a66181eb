"""Circular symmetrization of planar images of univalent series.

For a univalent f on the unit disk with image D, the package builds
the circular symmetrization D*, the normalized Riemann map F of the
disk onto D* (F(0) = |f(0)|, F'(0) > 0), and compares coefficients:
the weighted area identity sum n |a_n|^2 = sum n |A_n|^2 holds while
individual moduli |a_n| and |A_n| can order either way, and the
pipeline certifies explicit index pairs where each direction occurs.
"""

from .errors import (
    BoundaryAmbiguityError,
    BranchError,
    CircSymError,
    DegenerateContactWarning,
    DomainViolationError,
    GeometryError,
    InapplicableError,
    InputError,
    InsufficientSamplingError,
    ScopeError,
)
from .families import FAMILIES, family_member, mobius_disk, quadratic, rotated_disk
from .geometry import (
    ArcSet,
    BoundaryCurve,
    RadialProfile,
    RadialSlice,
    area_by_profile,
    area_by_shoelace,
    boundary_from_series,
    curve_from_csv,
    curve_to_csv,
    profile_from_csv,
    profile_to_csv,
    radial_profile,
    slice_at_radius,
    symmetrize,
    symmetrized_boundary,
    winding_number,
)
from .pipeline import (
    CoefficientRow,
    MeanRow,
    PipelineArtifacts,
    PipelineConfig,
    VerificationReport,
    Witness,
    check_area_identity,
    check_hayman,
    find_witness,
    run_pipeline,
    sweep,
)
from .series import (
    LittlewoodRow,
    MeanResult,
    PowerSeries,
    coefficients_from_samples,
    dirichlet_area,
    integral_mean,
    littlewood_check,
    periodic_trapezoid_mean,
)
from .zipper import (
    ElementaryStep,
    ZipperMap,
    build_map,
    eval_inverse,
    eval_map,
    series_of_map,
    with_target,
)

__version__ = "1.0.0"

__all__ = [
    "ArcSet",
    "BoundaryAmbiguityError",
    "BoundaryCurve",
    "BranchError",
    "CircSymError",
    "CoefficientRow",
    "DegenerateContactWarning",
    "DomainViolationError",
    "ElementaryStep",
    "FAMILIES",
    "GeometryError",
    "InapplicableError",
    "InputError",
    "InsufficientSamplingError",
    "LittlewoodRow",
    "MeanResult",
    "MeanRow",
    "PipelineArtifacts",
    "PipelineConfig",
    "PowerSeries",
    "RadialProfile",
    "RadialSlice",
    "ScopeError",
    "VerificationReport",
    "Witness",
    "ZipperMap",
    "area_by_profile",
    "area_by_shoelace",
    "boundary_from_series",
    "build_map",
    "check_area_identity",
    "check_hayman",
    "coefficients_from_samples",
    "curve_from_csv",
    "curve_to_csv",
    "dirichlet_area",
    "eval_inverse",
    "eval_map",
    "family_member",
    "find_witness",
    "integral_mean",
    "littlewood_check",
    "mobius_disk",
    "periodic_trapezoid_mean",
    "profile_from_csv",
    "profile_to_csv",
    "quadratic",
    "radial_profile",
    "rotated_disk",
    "run_pipeline",
    "series_of_map",
    "slice_at_radius",
    "sweep",
    "symmetrize",
    "symmetrized_boundary",
    "winding_number",
    "with_target",
]
