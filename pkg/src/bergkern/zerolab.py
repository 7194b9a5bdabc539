"""Kernel zero hunting: winding scans, Newton refinement, zero certificates.

Kernels are holomorphic in z for fixed w, so the argument principle gives
integer-exact zero counts per grid cell; Newton with the tree's exact
derivative then refines candidates to certified witnesses.  The remaining
operations exercise the zero-transfer, order-drop, boundary-ratio, and
near-boundary tracking statements on those witnesses.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainViolation,
    HypothesisUnmet,
    InconsistentOrder,
    MultipleZeroSuspected,
    NoConvergence,
    TrackingFailed,
    ValidationError,
    WindingError,
)
from .expr import KernelExpr
from .model import DomainSpec, ZeroWitness, as_complex
from .transforms import zero_augment

log = logging.getLogger(__name__)

IN_Z = "InZ"
IN_W = "InW"

_WINDING_TOL = 1e-3
_MAX_SUBDIV = 3
_RESIDUAL_FACTOR = 1e-10


@dataclass(frozen=True)
class GridSpec:
    """Rectangle in the plane cut into resolution x resolution scan cells."""

    xmin: float = -1.0
    xmax: float = 1.0
    ymin: float = -1.0
    ymax: float = 1.0
    resolution: int = 64
    samples_per_edge: int = 64
    boundary_margin: float = 1e-3

    def __post_init__(self) -> None:
        if self.xmax <= self.xmin or self.ymax <= self.ymin:
            raise ValidationError("grid region is empty")
        if self.resolution < 1:
            raise ValidationError("resolution must be positive")
        if self.samples_per_edge < 64:
            raise ValidationError("need at least 64 samples per cell edge")

    @classmethod
    def covering(cls, domain: DomainSpec, resolution: int = 64, **kw) -> "GridSpec":
        return cls(-1.0, 1.0, -1.0, 1.0, resolution, **kw)

    def cells(self):
        dx = (self.xmax - self.xmin) / self.resolution
        dy = (self.ymax - self.ymin) / self.resolution
        for iy in range(self.resolution):
            for ix in range(self.resolution):
                yield (
                    self.xmin + ix * dx,
                    self.xmin + (ix + 1) * dx,
                    self.ymin + iy * dy,
                    self.ymin + (iy + 1) * dy,
                )


@dataclass(frozen=True)
class RatioTrace:
    """|K(z, c_j)| / sqrt(K(c_j, c_j)) along a center sequence, z fixed."""

    z: complex
    centers: tuple[complex, ...]
    values: tuple[float, ...]
    diagonals: tuple[float, ...]


@dataclass(frozen=True)
class TransferReport:
    """Zero-transfer facts at one (center, point-pair) configuration.

    The biconditional: when the augmented kernel vanishes at (z0, w0), the
    base kernel vanishes there exactly when one of the cross values
    K(z0, c), K(c, w0) vanishes.  The ratio identity: when a cross value
    vanishes, the augmented kernel equals K(z0,w0)/((z0-c)(conj(w0)-conj(c))).
    """

    c: complex
    z0: complex
    w0: complex
    k_zw: complex
    k_zc: complex
    k_cw: complex
    k_cc: float
    aug_value: complex
    scale: float
    aug_vanishes: bool
    base_vanishes: bool
    factor_vanishes: bool
    biconditional_ok: bool
    ratio_applicable: bool
    ratio_rel_err: float | None = None
    ratio_ok: bool | None = None


@dataclass(frozen=True)
class TrackStep:
    index: int
    center: complex
    radius: float
    accepted: bool
    reason: str = ""
    z1: complex | None = None
    distance: float | None = None


@dataclass(frozen=True)
class LuQikengReport:
    status: str  # "zero_found" | "no_zero_at_resolution"
    witness: ZeroWitness | None
    z_resolution: int
    w_resolution: int
    slices_scanned: int
    w_used: complex | None = None

    @property
    def zero_found(self) -> bool:
        return self.status == "zero_found"


def _rect_loop(x0: float, x1: float, y0: float, y1: float, s: int) -> np.ndarray:
    """Counterclockwise closed sampling of a rectangle boundary, s per edge."""
    t = np.arange(s) / s
    bottom = x0 + (x1 - x0) * t + 1j * y0
    right = x1 + 1j * (y0 + (y1 - y0) * t)
    top = x1 - (x1 - x0) * t + 1j * y1
    left = x0 + 1j * (y1 - (y1 - y0) * t)
    return np.concatenate([bottom, right, top, left])


def _rect_radius_range(x0: float, x1: float, y0: float, y1: float) -> tuple[float, float]:
    corners = [abs(complex(x, y)) for x in (x0, x1) for y in (y0, y1)]
    dx = 0.0 if x0 <= 0.0 <= x1 else min(abs(x0), abs(x1))
    dy = 0.0 if y0 <= 0.0 <= y1 else min(abs(y0), abs(y1))
    return math.hypot(dx, dy), max(corners)


def _classify_cell(domain: DomainSpec, cell, margin: float) -> str:
    rmin, rmax = _rect_radius_range(*cell)
    inner = domain.inner_radius if domain.kind == "annulus" else 0.0
    if rmin >= 1.0 or (inner > 0.0 and rmax <= inner):
        return "outside"
    if rmax <= 1.0 - margin and (inner == 0.0 or rmin >= inner + margin):
        return "inside"
    return "boundary"


def _loop_winding(vals: np.ndarray) -> tuple[int | None, float]:
    """Winding count of a closed value loop, or None when uncertifiable."""
    a = np.abs(vals)
    scale = float(np.median(a))
    if scale == 0.0 or np.min(a) <= 1e-280:
        return None, scale
    total = float(np.sum(np.angle(np.roll(vals, -1) / vals)))
    k = round(total / (2.0 * math.pi))
    if abs(total - 2.0 * math.pi * k) > _WINDING_TOL or k < 0:
        return None, scale
    return k, scale


def _subdivide(cell):
    x0, x1, y0, y1 = cell
    xm, ym = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
    return [(x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1)]


def scan_slice_zeros(K: KernelExpr, w0, g: GridSpec) -> list[ZeroWitness]:
    """Certified zeros of z -> K(z, w0) inside the grid region.

    Cells are kept only when wholly inside the domain with the grid's margin
    to spare; cells near the boundary are logged and skipped (winding there
    is unreliable).  Non-integer argument sums trigger subdivision, up to
    three levels, then WindingError.
    """
    w0 = as_complex(w0)
    if not K.domain.contains(w0):
        raise DomainViolation(f"slice parameter {w0} not inside the domain")
    found: list[ZeroWitness] = []
    seen: set[tuple[float, float]] = set()
    skipped_boundary = 0
    stack = [(cell, 0) for cell in g.cells()]
    while stack:
        cell, depth = stack.pop()
        status = _classify_cell(K.domain, cell, g.boundary_margin)
        if status == "outside":
            continue
        if status == "boundary":
            skipped_boundary += 1
            continue
        loop = _rect_loop(*cell, g.samples_per_edge)
        winding, scale = _loop_winding(K.values_z(loop, w0))
        if winding is None or (winding > 1 and depth < _MAX_SUBDIV):
            if depth >= _MAX_SUBDIV:
                raise WindingError(
                    f"argument increment not within {_WINDING_TOL} of an integer multiple "
                    f"of 2*pi after {_MAX_SUBDIV} subdivision levels at cell {cell}"
                )
            stack.extend((sub, depth + 1) for sub in _subdivide(cell))
            continue
        if winding == 0:
            continue
        x0, x1, y0, y1 = cell
        guess = complex(0.5 * (x0 + x1), 0.5 * (y0 + y1))
        witness = refine_zero(K, w0, guess, scale=scale, winding=winding)
        key = (round(witness.z.real, 9), round(witness.z.imag, 9))
        if key not in seen:
            seen.add(key)
            found.append(witness)
    if skipped_boundary:
        log.debug("scan at w0=%s skipped %d boundary cells", w0, skipped_boundary)
    found.sort(key=lambda wit: (abs(wit.z), cmath.phase(wit.z)))
    return found


def _local_scale(K: KernelExpr, guess: complex, w0: complex, radius: float = 0.02) -> float:
    circle = guess + radius * np.exp(2j * np.pi * np.arange(16) / 16)
    ok = np.array([K.domain.contains(complex(p)) for p in circle])
    pts = circle[ok] if np.any(ok) else np.array([guess])
    return float(np.median(np.abs(K.values_z(pts.astype(complex), w0))))


def refine_zero(
    K: KernelExpr,
    w0,
    guess,
    scale: float | None = None,
    winding: int | None = None,
    max_iter: int = 50,
) -> ZeroWitness:
    """Newton-refine a zero of K(., w0) and certify the residual.

    Certification threshold is 1e-10 times the local kernel scale (median
    |K| near the guess, or over the enclosing scan cell's boundary).  A
    linearly stalling iteration raises MultipleZeroSuspected; escape from
    the starting region raises NoConvergence.
    """
    w0 = as_complex(w0)
    z = as_complex(guess)
    if scale is None:
        scale = _local_scale(K, z, w0)
    if scale <= 0.0:
        raise NoConvergence("kernel vanishes identically near the guess; no meaningful scale")
    tol = _RESIDUAL_FACTOR * scale
    steps: list[float] = []
    for _ in range(max_iter):
        f = K.value(z, w0)
        if abs(f) <= tol:
            break
        fp = K.dz(z, w0)
        if fp == 0:
            raise MultipleZeroSuspected(f"vanishing derivative at {z}")
        step = f / fp
        z = z - step
        steps.append(abs(step))
        if abs(z - as_complex(guess)) > 0.5 or not K.domain.in_closure(z):
            raise NoConvergence(f"Newton iteration escaped the search region (reached {z})")
        if len(steps) >= 2 and steps[-1] <= 1e-16:
            break
    residual = abs(K.value(z, w0))
    if residual > tol:
        ratios = [steps[i + 1] / steps[i] for i in range(len(steps) - 1) if steps[i] > 0]
        tail = ratios[-5:]
        if len(tail) >= 3 and all(0.2 <= q <= 0.95 for q in tail):
            raise MultipleZeroSuspected(
                f"Newton contraction stalled at linear rate ~{np.mean(tail):.2f}; residual {residual:.3e}"
            )
        raise NoConvergence(f"residual {residual:.3e} above {tol:.3e} after {max_iter} iterations")
    if winding is None:
        winding = zero_order(K, z, w0, IN_Z)
    return ZeroWitness(z=z, w=w0, residual=residual, winding=winding, order=winding)


def zero_order(K: KernelExpr, z0, c, direction: str, radius: float = 1e-3) -> int:
    """Zero order of the kernel slice at the point (z0, c).

    InZ: order of z -> K(z, c) at z = z0.  InW: order of w -> K(z0, w)
    at w = c, computed on the holomorphic reflection u -> K(u, z0) at
    u = c (same order by Hermitian symmetry).  Winding on a small circle
    is authoritative; Taylor coefficients must agree or InconsistentOrder.
    """
    z0 = as_complex(z0)
    c = as_complex(c)
    if direction not in (IN_Z, IN_W):
        raise ValidationError(f"direction must be {IN_Z} or {IN_W}")
    center, param = (z0, c) if direction == IN_Z else (c, z0)
    circle = center + radius * np.exp(2j * np.pi * np.arange(256) / 256)
    vals = K.values_z(circle.astype(complex), param)
    scale = float(np.median(np.abs(vals)))
    if abs(K.value(center, param)) > 1e-6 * max(scale, 1e-300):
        raise ValidationError(f"slice does not vanish at {center}; zero order undefined")
    m_wind, _ = _loop_winding(vals)
    if m_wind is None or m_wind < 1:
        raise InconsistentOrder(f"could not certify a positive winding on the order circle at {center}")
    depth = m_wind + 2
    jet = K.jet(z0, c, depth, 0) if direction == IN_Z else K.jet(z0, c, 0, depth)
    coeffs = jet[:, 0] if direction == IN_Z else jet[0, :]
    sized = np.abs(coeffs) * radius ** np.arange(len(coeffs))
    top = float(np.max(sized))
    m_deriv = int(np.argmax(sized > 1e-6 * top)) if top > 0 else -1
    if m_deriv != m_wind:
        raise InconsistentOrder(f"winding gives order {m_wind} but Taylor coefficients give {m_deriv}")
    return m_wind


def _vanishes(value: complex, diag_a: float, diag_b: float) -> bool:
    return abs(value) <= 1e-6 * math.sqrt(diag_a * diag_b)


def zero_transfer_report(K_phi: KernelExpr, c, z0, w0) -> TransferReport:
    """Check the zero-transfer biconditional and the ratio identity at one triple."""
    c = as_complex(c)
    z0 = as_complex(z0)
    w0 = as_complex(w0)
    for p, q, name in ((c, z0, "c=z0"), (c, w0, "c=w0"), (z0, w0, "z0=w0")):
        if abs(p - q) <= 1e-8:
            raise HypothesisUnmet(f"transfer points must be pairwise distinct ({name})")
    for center in K_phi.centers():
        if abs(c - center) <= 1e-8:
            raise HypothesisUnmet(f"augmentation center {c} coincides with a weight center")
    if not K_phi.domain.contains(c):
        raise DomainViolation(f"center {c} not inside the domain")
    k_zz = K_phi.value(z0, z0).real
    k_ww = K_phi.value(w0, w0).real
    k_cc = K_phi.value(c, c).real
    k_zw = K_phi.value(z0, w0)
    k_zc = K_phi.value(z0, c)
    k_cw = K_phi.value(c, w0)
    aug = zero_augment(K_phi, c)
    a_zz = aug.value(z0, z0).real
    a_ww = aug.value(w0, w0).real
    aug_value = aug.value(z0, w0)
    scale = math.sqrt(k_zz * k_ww)
    aug_vanishes = _vanishes(aug_value, a_zz, a_ww)
    base_vanishes = _vanishes(k_zw, k_zz, k_ww)
    factor_vanishes = _vanishes(k_zc, k_zz, k_cc) or _vanishes(k_cw, k_cc, k_ww)
    biconditional_ok = (not aug_vanishes) or (base_vanishes == factor_vanishes)
    ratio_applicable = factor_vanishes
    ratio_rel_err = None
    ratio_ok = None
    if ratio_applicable:
        expected = k_zw / ((z0 - c) * (w0.conjugate() - c.conjugate()))
        denom = max(abs(expected), 1e-12 * scale)
        ratio_rel_err = abs(aug_value - expected) / denom
        ratio_ok = ratio_rel_err <= 1e-8
    return TransferReport(
        c=c,
        z0=z0,
        w0=w0,
        k_zw=k_zw,
        k_zc=k_zc,
        k_cw=k_cw,
        k_cc=k_cc,
        aug_value=aug_value,
        scale=scale,
        aug_vanishes=aug_vanishes,
        base_vanishes=base_vanishes,
        factor_vanishes=factor_vanishes,
        biconditional_ok=biconditional_ok,
        ratio_applicable=ratio_applicable,
        ratio_rel_err=ratio_rel_err,
        ratio_ok=ratio_ok,
    )


def order_drop_ratio(K_phi: KernelExpr, z0, c, radius: float = 1e-3) -> float:
    """|K_{|z-c|^2 phi}(z0, c)| over the local scale of that slice near c.

    At a simple zero of K_phi(z0, .) at w = c, augmenting by |z - c|^2
    drops the order to zero, so the augmented slice is resolvably
    nonzero at c: this ratio sits near 1 instead of below the 1e-6
    vanishing threshold.  The scale is the median modulus of the
    augmented slice on the same radius-1e-3 probe circle zero_order
    uses; diagonal-based scales are avoided because they collapse near
    the boundary where kernel diagonals blow up.
    """
    z0 = as_complex(z0)
    c = as_complex(c)
    aug = zero_augment(K_phi, c)
    circle = c + radius * np.exp(2j * np.pi * np.arange(256) / 256)
    reflected = aug.values_z(circle.astype(complex), z0)
    scale = float(np.median(np.abs(reflected)))
    return abs(aug.value(z0, c)) / max(scale, 1e-300)


def boundary_ratio(K: KernelExpr, z, centers) -> RatioTrace:
    """Trace of |K(z, c_j)|/sqrt(K(c_j, c_j)) along a center sequence."""
    z = as_complex(z)
    if not K.domain.contains(z):
        raise DomainViolation(f"base point {z} not inside the domain")
    cs = tuple(as_complex(c) for c in centers)
    values = []
    diagonals = []
    for c in cs:
        if not K.domain.contains(c):
            raise DomainViolation(f"ratio center {c} not inside the domain")
        diag = K.value(c, c)
        if not (diag.real > 0.0 and abs(diag.imag) <= 1e-8 * diag.real):
            raise ValidationError(f"kernel diagonal at {c} is not positive: {diag}")
        diagonals.append(diag.real)
        values.append(abs(K.value(z, c)) / math.sqrt(diag.real))
    return RatioTrace(z=z, centers=cs, values=tuple(values), diagonals=tuple(diagonals))


def track_zero_near_boundary(
    K_phi: KernelExpr,
    witness: ZeroWitness,
    centers,
    ball_samples: int = 64,
) -> list[TrackStep]:
    """Follow the witness zero into augmented kernels as centers approach the boundary.

    Mirrors the existence proof: a center c_j is accepted once
    alpha(c_j) = |K(c_j, w0)|/K(c_j, c_j) drops below both the current ball
    radius and inf |K(z, w0)/K(z, c_j)| over the ball boundary (with the
    denominator checked to stay away from zero); each accepted step Newton-
    refines the zero of the |z-c_j|^2-augmented slice and halves the ball.
    Raises TrackingFailed if a hypothesis-passing step loses the zero, or
    if no center ever passes the gates.
    """
    z0 = witness.z
    w0 = witness.w
    dom = K_phi.domain
    radius = 0.5 * dom.boundary_distance(z0)
    angles = np.exp(2j * np.pi * np.arange(ball_samples) / ball_samples)
    # initial ball must isolate the witness zero of K(., w0)
    for _ in range(8):
        wind, _ = _loop_winding(K_phi.values_z((z0 + radius * angles).astype(complex), w0))
        if wind == witness.winding:
            break
        radius *= 0.5
    else:
        raise TrackingFailed(-1, "could not isolate the witness zero in a tracking ball")
    steps: list[TrackStep] = []
    z_prev = z0
    last_reason = "no centers supplied"
    for j, craw in enumerate(centers):
        c = as_complex(craw)
        if not dom.contains(c):
            raise DomainViolation(f"tracking center {c} not inside the domain")
        if abs(c - z0) <= radius:
            # The deflation numerator K(z, w0) - K(z, c) K(c, w0)/K(c, c)
            # always vanishes at z = c.  With c inside the ball, that forced
            # zero consumes the ball's zero count and the augmented slice has
            # nothing left to track; the existence argument needs c outside.
            last_reason = "deflation center inside the tracking ball"
            steps.append(TrackStep(j, c, radius, False, last_reason))
            continue
        k_cc = K_phi.value(c, c).real
        alpha = abs(K_phi.value(c, w0)) / k_cc
        circle = (z0 + radius * angles).astype(complex)
        num = np.abs(K_phi.values_z(circle, w0))
        den = np.abs(K_phi.values_z(circle, c))
        floor = 1e-8 * math.sqrt(k_cc * K_phi.value(z0, z0).real)
        if np.min(den) <= floor:
            last_reason = "kernel against the center vanishes on the ball boundary"
            steps.append(TrackStep(j, c, radius, False, last_reason))
            continue
        g_inf = float(np.min(num / den))
        if not (alpha < g_inf and alpha < radius):
            last_reason = (
                f"ratio gate not open (alpha {alpha:.3e} vs inf {g_inf:.3e}, radius {radius:.3e})"
            )
            steps.append(TrackStep(j, c, radius, False, last_reason))
            continue
        aug = zero_augment(K_phi, c)
        try:
            refined = refine_zero(aug, w0, z_prev)
        except (NoConvergence, MultipleZeroSuspected) as exc:
            raise TrackingFailed(j, f"refinement failed after gates passed: {exc}") from exc
        dist = abs(refined.z - z0)
        if dist >= radius:
            raise TrackingFailed(j, f"tracked zero left the ball (|z1 - z0| = {dist:.3e} >= {radius:.3e})")
        steps.append(TrackStep(j, c, radius, True, "", refined.z, dist))
        z_prev = refined.z
        radius *= 0.5
    if not any(s.accepted for s in steps):
        raise TrackingFailed(len(steps) - 1, f"no center passed the proof gates; last: {last_reason}")
    return steps


def lu_qikeng_status(K: KernelExpr, z_grid: GridSpec, w_grid: GridSpec) -> LuQikengReport:
    """Scan the product grid for a certified kernel zero.

    w runs over the w-grid cell centers inside the domain, outermost moduli
    first (annulus-style kernels vanish toward the boundary, so this order
    finds witnesses early); z-scans use the winding machinery.  A witness
    certifies the domain/weight pair as non-Lu-Qi-keng; an empty scan is
    only a statement at this resolution.
    """
    candidates = []
    for (x0, x1, y0, y1) in w_grid.cells():
        w = complex(0.5 * (x0 + x1), 0.5 * (y0 + y1))
        if K.domain.contains(w) and K.domain.boundary_distance(w) > w_grid.boundary_margin:
            candidates.append(w)
    candidates.sort(key=lambda w: (-abs(w), cmath.phase(w)))
    scanned = 0
    for w in candidates:
        scanned += 1
        witnesses = scan_slice_zeros(K, w, z_grid)
        if witnesses:
            return LuQikengReport(
                status="zero_found",
                witness=witnesses[0],
                z_resolution=z_grid.resolution,
                w_resolution=w_grid.resolution,
                slices_scanned=scanned,
                w_used=w,
            )
    return LuQikengReport(
        status="no_zero_at_resolution",
        witness=None,
        z_resolution=z_grid.resolution,
        w_resolution=w_grid.resolution,
        slices_scanned=scanned,
    )
