"""Weighted hyperbolic distortion of self-maps of the unit disk and boundary
diagnostics for recognising finite Blaschke products."""

from .boundary import (
    AngularDerivativeEstimate,
    ApproachPath,
    LimitEstimate,
    Marker,
    estimate_angular_derivative,
    estimate_angular_liminf,
    estimate_angular_limit,
    make_paths,
)
from .classifier import (
    BoundarySampling,
    BoundednessReport,
    ClassificationVerdict,
    ClassifyConfig,
    Reason,
    Verdict,
    angular_derivative_bound,
    arc_scan,
    boundary_profile,
    boundedness_scan,
    check_angular_derivative_bound,
    classify,
    heins_scan,
    kraus_scan,
    liminf_scan,
)
from .disk_geom import BoundaryPoint, DiskPoint, StolzRegion, hyperbolic_density, one_minus_mod_sq, stolz_contains
from .distortion import DistortionSample, jc_quotient, schwarz_lemma_floor, tau_alpha
from .errors import (
    AlphaExcluded,
    ApertureTooNarrow,
    BlaschkeLabError,
    DomainError,
    EvaluationOverflow,
    InsufficientDepth,
    MapSpecError,
    OverflowNearSingularity,
    StepTooLargeNearBoundary,
    TauOverflow,
    UnsupportedVariant,
)
from .maps import (
    AffineContraction,
    AtomicSingular,
    Automorphism,
    Composition,
    FiniteBlaschke,
    Identity,
    MapValue,
    SelfMap,
    blaschke_truncation,
    catalog,
    declared_singular_support,
    dual_derivative,
    evaluate,
    from_spec,
    load_spec,
    parse_spec,
    stable_one_minus_mod_sq,
)
from .oracles import (
    OracleConfig,
    blaschke_boundary_derivative,
    extended_precision_one_minus_mod_sq,
    extended_precision_tau,
    finite_difference_derivative,
)

__version__ = "0.1.0"
