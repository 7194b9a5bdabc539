"""Hartogs domains over planar bases and their slice-kernel zero certificates.

A rotation-invariant Hartogs domain {(z, w) : z in base, |w| < rho(z)} has
square-integrable holomorphic functions that split into Fourier modes in w;
the mode constant in w is exactly the weighted space on the base with the
fiber-area weight pi rho(z)^2.  The two-dimensional Bergman kernel restricted
to the w = 0 slice therefore equals the planar weighted kernel for that
weight, and every certified zero of the planar kernel certifies that the
Hartogs domain is not Lu Qi-keng.  Nothing two-dimensional is discretized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .expr import KernelExpr, RationalDivide
from .model import Constant, DomainSpec, RadialPower, WeightSpec, ZeroWitness, as_complex
from .transforms import weighted_kernel
from .zerolab import GridSpec, lu_qikeng_status

CERTIFIED = "certified"
INCONCLUSIVE = "inconclusive"

_SLICE_METHOD = "forelli-rudin-slice"


@dataclass(frozen=True)
class HartogsSpec:
    """Hartogs domain {(z, w) : z in base, |w| < rho(z)} with rational-power radius.

    The radius profile is a WeightSpec read in single-power units: a constant
    base contributes its value, a radial base alpha contributes |z|^alpha, and
    each zero/pole factor (c, m) contributes |z - c|^(+-m).  Squaring the
    profile lands back on the package's usual squared-factor units, so the
    slice weight pi * rho^2 reuses the same factor tuples; slice_constant
    carries whatever positive constant the slice weight's base cannot absorb
    (the weight value is slice_constant * weight_value(slice_weight, z)).
    """

    base: DomainSpec
    profile_weight: WeightSpec
    slice_weight: WeightSpec
    slice_constant: float
    bounded: bool

    def __post_init__(self) -> None:
        if not (math.isfinite(self.slice_constant) and self.slice_constant > 0):
            raise ValidationError(f"slice constant must be positive, got {self.slice_constant}")

    def to_dict(self) -> dict:
        return {
            "base": self.base.to_dict(),
            "profile_weight": self.profile_weight.to_dict(),
            "slice_weight": self.slice_weight.to_dict(),
            "slice_constant": self.slice_constant,
            "bounded": self.bounded,
        }


def profile_value(h: HartogsSpec, p) -> float:
    """Fiber radius rho at a base point; +inf at a profile pole center."""
    z = as_complex(p)
    prof = h.profile_weight
    if any(z == f.center for f in prof.poles):
        return math.inf
    if isinstance(prof.base, Constant):
        v = prof.base.value
    else:
        if z == 0 and prof.base.alpha < 0:
            return math.inf
        v = abs(z) ** prof.base.alpha
    for f in prof.zeros:
        v *= abs(z - f.center) ** f.mult
    for f in prof.poles:
        v /= abs(z - f.center) ** f.mult
    return v


def _is_bounded(base: DomainSpec, profile: WeightSpec) -> bool:
    if any(base.in_closure(f.center) for f in profile.poles):
        return False
    if isinstance(profile.base, RadialPower) and profile.base.alpha < 0 and base.in_closure(0):
        return False
    return True


def lift(base: DomainSpec, profile: WeightSpec) -> HartogsSpec:
    """Build the Hartogs domain whose w = 0 slice kernel is computable here.

    The slice weight is pi * rho^2 for the radius profile rho; squaring doubles
    every single-power factor exponent, which is precisely reinterpreting the
    unchanged factor tuples in squared units, and turns a radial base alpha
    into 2*alpha.  A constant base absorbs the pi; a radial base cannot, so the
    leftover constant is recorded for the kernel to divide out.
    """
    if isinstance(profile.base, Constant):
        squared = WeightSpec(
            Constant(math.pi * profile.base.value**2),
            zeros=profile.zeros,
            poles=profile.poles,
        )
        const = 1.0
    else:
        squared = WeightSpec(
            RadialPower(2.0 * profile.base.alpha),
            zeros=profile.zeros,
            poles=profile.poles,
        )
        const = math.pi
    return HartogsSpec(
        base=base,
        profile_weight=profile,
        slice_weight=squared,
        slice_constant=const,
        bounded=_is_bounded(base, profile),
    )


def slice_kernel(h: HartogsSpec, mode: str | None = None) -> KernelExpr:
    """Weighted kernel of the w = 0 slice; equals the restricted C^2 kernel.

    Scaling a weight by a positive constant scales its kernel by the inverse
    constant, so a leftover slice constant becomes a plain division.
    """
    if mode is None:
        K = weighted_kernel(h.base, h.slice_weight)
    else:
        K = weighted_kernel(h.base, h.slice_weight, mode)
    if h.slice_constant != 1.0:
        K = RationalDivide(K, (), math.sqrt(h.slice_constant))
    return K


@dataclass(frozen=True)
class HartogsCertificate:
    """Outcome of the slice-kernel zero hunt for one Hartogs domain.

    A certified witness (z, w) of the slice kernel is a zero of the
    two-dimensional kernel at ((z, 0), (w, 0)), so "certified" settles the
    Lu Qi-keng question negatively; "inconclusive" is only a statement at
    the scanned resolution.
    """

    spec: HartogsSpec
    status: str
    witness: ZeroWitness | None
    z_resolution: int
    w_resolution: int
    slices_scanned: int
    method: str = _SLICE_METHOD

    @property
    def certified(self) -> bool:
        return self.status == CERTIFIED

    def to_dict(self) -> dict:
        return {
            "domain": self.spec.to_dict(),
            "status": self.status,
            "witness": self.witness.to_dict() if self.witness is not None else None,
            "method": self.method,
            "z_resolution": self.z_resolution,
            "w_resolution": self.w_resolution,
            "slices_scanned": self.slices_scanned,
        }


def certify_non_lu_qikeng(
    h: HartogsSpec,
    z_grid: GridSpec | None = None,
    w_grid: GridSpec | None = None,
) -> HartogsCertificate:
    """Scan the slice kernel for a certified zero of the C^2 kernel."""
    zg = z_grid if z_grid is not None else GridSpec.covering(h.base)
    wg = w_grid if w_grid is not None else GridSpec.covering(h.base, resolution=8)
    report = lu_qikeng_status(slice_kernel(h), zg, wg)
    status = CERTIFIED if report.zero_found else INCONCLUSIVE
    return HartogsCertificate(
        spec=h,
        status=status,
        witness=report.witness,
        z_resolution=zg.resolution,
        w_resolution=wg.resolution,
        slices_scanned=report.slices_scanned,
    )
