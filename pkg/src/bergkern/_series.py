"""Bilateral monomial series for the annulus kernel, with honest tail bounds.

On {r < |z| < 1} the monomials z^n, n in Z, are orthogonal under any radial
weight |z|^alpha, so the kernel is a bilateral power series in t = z*conj(w).
The negative-index side is summed in the variable r^2/t (modulus < 1 inside
the annulus), which keeps every intermediate finite however many terms the
evaluation radius demands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainViolation

_LOG_NORM_EPS = 1e-9


@dataclass(frozen=True)
class SeriesTruncation:
    """Symmetric bilateral cutoff |n| <= n_max and the tail bound it earned."""

    n_max: int = 400
    tail_bound: float = 0.0

    def __post_init__(self) -> None:
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")


def _check_annulus_point(r: float, z: complex, w: complex) -> tuple[float, float]:
    x = abs(z) * abs(w)
    if x >= 1.0 or x <= r * r:
        raise DomainViolation(f"annulus series needs r^2 < |z||w| < 1, got |z||w| = {x}")
    return x, r * r / x


def _pos_coeffs(r: float, n_max: int, alpha: float, const: float) -> np.ndarray:
    """1/nu_n for n = 0..n_max."""
    ns = np.arange(0, n_max + 1)
    e = 2 * ns + alpha + 2
    out = np.empty(n_max + 1)
    log_mask = np.abs(e) < _LOG_NORM_EPS
    out[~log_mask] = e[~log_mask] / (2 * math.pi * (1 - r ** e[~log_mask]))
    out[log_mask] = 1.0 / (2 * math.pi * math.log(1.0 / r))
    return out / const


def _neg_coeffs(r: float, n_max: int, alpha: float, const: float) -> tuple[np.ndarray, np.ndarray]:
    """For n = -m, m = 1..n_max: coefficients c such that term = c * (r^2/t)^m.

    1/nu_n * t^n = c_m * (r^2/t)^m with c_m = -e * r^(-alpha-2) / (2 pi (1 - r^|e|))
    for e = 2n + alpha + 2 < 0; small m with e >= 0 are folded into the same
    scaled form, and the e = 0 index picks up the logarithmic norm.
    """
    ms = np.arange(1, n_max + 1)
    e = alpha + 2 - 2 * ms
    out = np.empty(n_max)
    r_pow = r ** (-alpha - 2.0)
    for i, ei in enumerate(e):
        if abs(ei) < _LOG_NORM_EPS:
            c = 1.0 / (2 * math.pi * math.log(1.0 / r))
            out[i] = c * r ** (-2.0 * ms[i])
        elif ei < 0:
            out[i] = (-ei) * r_pow / (2 * math.pi * (1 - r ** (-ei)))
        else:
            c = ei / (2 * math.pi * (1 - r ** ei))
            out[i] = c * r ** (-2.0 * ms[i])
    return ms, out / const


def _falling(ns: np.ndarray, k: int) -> np.ndarray:
    out = np.ones_like(ns, dtype=float)
    for i in range(k):
        out = out * (ns - i)
    return out


def annulus_jet(
    r: float,
    z: complex,
    w: complex,
    nz: int,
    nw: int,
    n_max: int,
    alpha: float = 0.0,
    const: float = 1.0,
) -> np.ndarray:
    """Taylor jet of the annulus kernel at (z, conj w)."""
    _check_annulus_point(r, z, w)
    t = z * w.conjugate()
    ns_pos = np.arange(0, n_max + 1)
    c_pos = _pos_coeffs(r, n_max, alpha, const)
    t_pos = t ** ns_pos
    ms, c_neg = _neg_coeffs(r, n_max, alpha, const)
    s_neg = (r * r / t) ** ms
    ns_neg = -ms

    J = np.zeros((nz + 1, nw + 1), dtype=complex)
    for a in range(nz + 1):
        fa_pos = _falling(ns_pos, a)
        fa_neg = _falling(ns_neg, a)
        for b in range(nw + 1):
            fb_pos = _falling(ns_pos, b)
            fb_neg = _falling(ns_neg, b)
            s = np.sum(c_pos * fa_pos * fb_pos * t_pos) + np.sum(c_neg * fa_neg * fb_neg * s_neg)
            J[a, b] = s * z ** (-a) * w.conjugate() ** (-b) / (math.factorial(a) * math.factorial(b))
    return J


def annulus_values(
    r: float,
    zs: np.ndarray,
    w: complex,
    n_max: int,
    alpha: float = 0.0,
    const: float = 1.0,
) -> np.ndarray:
    """Kernel values K(zs[i], w), vectorized over the first argument."""
    zs = np.asarray(zs, dtype=complex)
    t = zs * w.conjugate()
    c_pos = _pos_coeffs(r, n_max, alpha, const)
    _, c_neg = _neg_coeffs(r, n_max, alpha, const)
    pos = np.polynomial.polynomial.polyval(t, c_pos)
    # negative side starts at m = 1, so prepend a zero constant coefficient
    neg = np.polynomial.polynomial.polyval(r * r / t, np.concatenate(([0.0], c_neg)))
    return pos + neg


def annulus_tail_bound(
    r: float,
    z: complex,
    w: complex,
    n_max: int,
    alpha: float = 0.0,
    const: float = 1.0,
) -> float:
    """Upper bound on the sum of dropped |n| > n_max terms."""
    x, q = _check_annulus_point(r, z, w)
    N = n_max
    # positive side: sum_{n>N} (2n+alpha+2) x^n / (2 pi (1 - r^(2n+alpha+2)))
    c1 = 1 - r ** (2 * (N + 1) + alpha + 2)
    sum_n = x ** (N + 1) * ((N + 1) - N * x) / (1 - x) ** 2
    sum_1 = x ** (N + 1) / (1 - x)
    pos = (2 * sum_n + (alpha + 2) * sum_1) / (2 * math.pi * c1)
    # negative side: terms (2m-alpha-2) r^(-alpha-2) q^m / (2 pi (1 - r^(2m-alpha-2)))
    e_min = 2 * (N + 1) - alpha - 2
    if e_min <= 0:
        return math.inf
    c2 = 1 - r ** e_min
    sum_m = q ** (N + 1) * ((N + 1) - N * q) / (1 - q) ** 2
    neg = 2 * sum_m * r ** (-alpha - 2.0) / (2 * math.pi * c2)
    return (pos + neg) / const


def auto_n_max(r: float, z: complex, w: complex, alpha: float = 0.0) -> int:
    """Grow the cutoff until the tail is negligible at this evaluation point."""
    x, q = _check_annulus_point(r, z, w)
    scale = (1.0 / max(1 - x, 1e-8) ** 2 + 1.0 / (r * r * max(1 - q, 1e-8) ** 2)) / (2 * math.pi)
    n = 400
    while n < 2_000_000:
        if annulus_tail_bound(r, z, w, n, alpha) <= 1e-15 * scale:
            break
        n = int(n * 1.7) + 1
    return n
