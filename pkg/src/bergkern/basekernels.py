"""Base kernels: disk closed forms, annulus bilateral series, automorphism pullback.

These are the leaves every weighted kernel is built from.  The disk kernel
and its radial and Mobius-power variants are hard-coded closed forms; the
annulus kernel is a truncated bilateral series with a computed tail bound.
"""

from __future__ import annotations

import math

from ._series import SeriesTruncation, annulus_jet, annulus_tail_bound
from .errors import DomainViolation, TruncationTooSmall, ValidationError
from .expr import BaseKernel, KernelExpr, MobiusMap, MobiusTransport
from .model import BaseWeight, Constant, DomainSpec, RadialPower, as_complex

__all__ = [
    "SeriesTruncation",
    "MobiusMap",
    "base_kernel",
    "disk_kernel",
    "disk_radial_kernel",
    "disk_mobius_power_kernel",
    "annulus_kernel",
    "annulus_truncation",
    "biholomorphic_transport",
]


def base_kernel(domain: DomainSpec, base: BaseWeight = Constant(1.0), trunc: SeriesTruncation | None = None) -> KernelExpr:
    """Kernel expression for a domain with a constant or radial base weight."""
    return BaseKernel(domain, base, trunc)


def _check_disk_point(p) -> complex:
    z = as_complex(p)
    if abs(z) >= 1.0:
        raise DomainViolation(f"|{z}| = {abs(z)} >= 1")
    return z


def disk_kernel(z, w) -> complex:
    """Unweighted unit-disk kernel 1 / (pi (1 - z conj w)^2)."""
    z = _check_disk_point(z)
    w = _check_disk_point(w)
    return 1.0 / (math.pi * (1.0 - z * w.conjugate()) ** 2)


def disk_radial_kernel(alpha: float, z, w) -> complex:
    """Disk kernel under the weight |z|^alpha, alpha > -2.

    Equals (1 + alpha/2 - (alpha/2) z conj w) times the unweighted kernel.
    """
    RadialPower(alpha)  # range check
    z = _check_disk_point(z)
    w = _check_disk_point(w)
    t = z * w.conjugate()
    return (1.0 + alpha / 2.0 - (alpha / 2.0) * t) / (math.pi * (1.0 - t) ** 2)


def disk_mobius_power_kernel(c, p: int, z, w) -> complex:
    """Disk kernel under the weight |z - c|^(2p) for an interior center c.

    Uses the factorization |z - c|^2 = |mu_c(z)|^2 |1 - conj(c) z|^2 with the
    automorphism mu_c(z) = (z - c)/(1 - conj(c) z): the radial closed form is
    transported to c and divided by the outer-zero factors.
    """
    c = as_complex(c)
    if abs(c) >= 1.0:
        raise DomainViolation(f"mobius power center |{c}| >= 1")
    if not isinstance(p, int) or p < 1:
        raise ValidationError(f"power p must be a positive integer, got {p}")
    z = _check_disk_point(z)
    w = _check_disk_point(w)
    mu_z = (z - c) / (1.0 - c.conjugate() * z)
    mu_w = (w - c) / (1.0 - c.conjugate() * w)
    t = z * w.conjugate()
    k = 1.0 / (math.pi * (1.0 - t) ** 2)
    return ((p + 1) - p * mu_z * mu_w.conjugate()) * k / (
        (1.0 - c.conjugate() * z) ** p * (1.0 - c * w.conjugate()) ** p
    )


def _check_annulus_shell(r: float, z: complex, w: complex) -> None:
    lo = r + 0.01 * (1.0 - r)
    hi = 0.95
    for p in (z, w):
        if not (lo <= abs(p) <= hi):
            raise DomainViolation(
                f"annulus series evaluation restricted to {lo} <= |z| <= {hi} by default; got |{p}| = {abs(p)}"
            )


def annulus_kernel(
    r: float,
    z,
    w,
    trunc: SeriesTruncation | None = None,
    accuracy: float | None = None,
    enforce_shell: bool = True,
) -> complex:
    """Annulus {r < |z| < 1} kernel via the bilateral monomial series.

    Norms are pi (1 - r^(2n+2))/(n+1) for n != -1 and 2 pi log(1/r) at
    n = -1.  Evaluation is restricted to a safety shell by default so the
    default cutoff keeps its tail bound honest; raises TruncationTooSmall if
    an accuracy is requested that the cutoff cannot certify.
    """
    if not (0.0 < r < 1.0):
        raise ValidationError(f"inner radius {r} not in (0, 1)")
    z = as_complex(z)
    w = as_complex(w)
    if enforce_shell:
        _check_annulus_shell(r, z, w)
    if trunc is None:
        trunc = SeriesTruncation()
    bound = annulus_tail_bound(r, z, w, trunc.n_max)
    if accuracy is not None and bound > accuracy:
        raise TruncationTooSmall(f"tail bound {bound} exceeds requested accuracy {accuracy}")
    return complex(annulus_jet(r, z, w, 0, 0, trunc.n_max)[0, 0])


def annulus_truncation(r: float, z, w, n_max: int = 400) -> SeriesTruncation:
    """The truncation report (cutoff and tail bound) for one evaluation point."""
    return SeriesTruncation(n_max, annulus_tail_bound(r, as_complex(z), as_complex(w), n_max))


def biholomorphic_transport(K: KernelExpr, map: MobiusMap) -> KernelExpr:
    """Pull K back along a disk automorphism.

    The result is f'(z) K(f(z), f(w)) conj(f'(w)): the kernel whose weight is
    the original weight composed with f.  The unweighted disk kernel is a
    fixed point of every such pullback.
    """
    if not isinstance(map, MobiusMap):
        raise ValidationError("map must be a MobiusMap")
    return MobiusTransport(K, map)
