"""Explicit weighted Bergman kernels on the disk and annulus.

Closed-form and series base kernels, weight transforms that stay exact
(rational division, rank-one deflation for interior zeros), a Gram-matrix
oracle for cross-checking, and tools that locate and certify kernel zeros.
"""

from .basekernels import (
    annulus_kernel,
    annulus_truncation,
    base_kernel,
    biholomorphic_transport,
    disk_kernel,
    disk_mobius_power_kernel,
    disk_radial_kernel,
)
from .errors import (
    AlphaOutOfRange,
    BergkernError,
    BoundaryTooClose,
    DegenerateCenter,
    DivergentMoment,
    DomainViolation,
    HolomorphyViolation,
    HypothesisUnmet,
    IllConditioned,
    InconsistentOrder,
    InvalidAutomorphism,
    MultipleZeroSuspected,
    NoConvergence,
    PoleAtPoint,
    TrackingFailed,
    TruncationTooSmall,
    ValidationError,
    WindingError,
)
from .expr import KernelExpr, MobiusMap, SeriesTruncation
from .hartogs import (
    CERTIFIED,
    INCONCLUSIVE,
    HartogsCertificate,
    HartogsSpec,
    certify_non_lu_qikeng,
    lift,
    profile_value,
    slice_kernel,
)
from .model import (
    ComplexPoint,
    Constant,
    DomainSpec,
    Factor,
    Polynomial,
    RadialPower,
    WeightSpec,
    ZeroWitness,
    dumps_config,
    weight_value,
)
from .oracle import (
    GramSpec,
    QuadratureSpec,
    build_rule,
    gram_kernel_eval,
    gram_kernel_values,
    monomial_moments,
    verify_reproducing,
)
from .transforms import (
    DIRECT_SUM,
    ITERATED,
    DecompositionPlan,
    eval_with_limits,
    multi_zero_augment,
    pole_divide,
    to_formula,
    weighted_kernel,
    zero_augment,
)
from .zerolab import (
    IN_W,
    IN_Z,
    GridSpec,
    LuQikengReport,
    RatioTrace,
    TrackStep,
    TransferReport,
    boundary_ratio,
    lu_qikeng_status,
    order_drop_ratio,
    refine_zero,
    scan_slice_zeros,
    track_zero_near_boundary,
    zero_order,
    zero_transfer_report,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaOutOfRange",
    "BergkernError",
    "BoundaryTooClose",
    "CERTIFIED",
    "ComplexPoint",
    "Constant",
    "DIRECT_SUM",
    "DecompositionPlan",
    "DegenerateCenter",
    "DivergentMoment",
    "DomainSpec",
    "DomainViolation",
    "Factor",
    "GramSpec",
    "GridSpec",
    "HartogsCertificate",
    "HartogsSpec",
    "HolomorphyViolation",
    "HypothesisUnmet",
    "IN_W",
    "IN_Z",
    "INCONCLUSIVE",
    "ITERATED",
    "IllConditioned",
    "InconsistentOrder",
    "InvalidAutomorphism",
    "KernelExpr",
    "LuQikengReport",
    "MobiusMap",
    "MultipleZeroSuspected",
    "NoConvergence",
    "PoleAtPoint",
    "Polynomial",
    "QuadratureSpec",
    "RadialPower",
    "RatioTrace",
    "SeriesTruncation",
    "TrackStep",
    "TrackingFailed",
    "TransferReport",
    "TruncationTooSmall",
    "ValidationError",
    "WeightSpec",
    "WindingError",
    "ZeroWitness",
    "annulus_kernel",
    "annulus_truncation",
    "base_kernel",
    "biholomorphic_transport",
    "boundary_ratio",
    "build_rule",
    "certify_non_lu_qikeng",
    "disk_kernel",
    "disk_mobius_power_kernel",
    "disk_radial_kernel",
    "dumps_config",
    "eval_with_limits",
    "gram_kernel_eval",
    "gram_kernel_values",
    "lift",
    "lu_qikeng_status",
    "monomial_moments",
    "multi_zero_augment",
    "order_drop_ratio",
    "pole_divide",
    "profile_value",
    "refine_zero",
    "scan_slice_zeros",
    "to_formula",
    "track_zero_near_boundary",
    "verify_reproducing",
    "weight_value",
    "weighted_kernel",
    "zero_augment",
    "zero_order",
    "zero_transfer_report",
]
