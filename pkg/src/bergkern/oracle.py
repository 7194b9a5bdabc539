"""Brute-force kernel oracle: Gram matrices of monomials plus quadrature.

Independent of the transform engine: kernels are rebuilt from first
principles as v(w)^H G^{-1} v(z) for the moment matrix G of the monomial
basis, and the reproducing property is checked by numerical integration.
Moments use exact closed forms whenever the weight is a polynomial modulus
squared times a constant or radial-power base; a tensor quadrature rule
covers out-of-domain pole factors and the reproducing integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import cho_factor, cho_solve

from .errors import DivergentMoment, DomainViolation, IllConditioned, ValidationError
from .expr import KernelExpr
from .model import Constant, DomainSpec, Polynomial, RadialPower, WeightSpec, as_complex, weight_value

_COND_CAP = 1e12


@dataclass(frozen=True)
class QuadratureSpec:
    """Tensor rule: Gauss-Legendre radial nodes x uniform angular nodes."""

    radial_nodes: int = 64
    angular_nodes: int = 128

    def __post_init__(self) -> None:
        if self.radial_nodes < 1:
            raise ValidationError("radial_nodes must be positive")
        if self.angular_nodes < 2 or self.angular_nodes % 2:
            raise ValidationError("angular_nodes must be even and >= 2")

    def exact_degree(self) -> int:
        # z^a conj(z)^b integrates exactly when a+b+1 <= 2*radial-1 and
        # |a-b| <= angular-1; report the largest safe total degree a+b.
        return min(2 * self.radial_nodes - 2, self.angular_nodes - 1)


def build_rule(domain: DomainSpec, q: QuadratureSpec = QuadratureSpec()) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights integrating f(z) dA over the domain.

    Radial direction is Gauss-Legendre mapped to [r, 1] (r = 0 on the disk);
    the periodic direction uses the uniform rule, spectrally accurate there.
    """
    r0 = domain.inner_radius if domain.kind == "annulus" else 0.0
    x, u = leggauss(q.radial_nodes)
    rho = 0.5 * (x + 1.0) * (1.0 - r0) + r0
    w_rho = 0.5 * (1.0 - r0) * u
    theta = 2.0 * np.pi * np.arange(q.angular_nodes) / q.angular_nodes
    w_theta = 2.0 * np.pi / q.angular_nodes
    pts = (rho[:, None] * np.exp(1j * theta)[None, :]).ravel()
    wts = ((w_rho * rho)[:, None] * np.full(q.angular_nodes, w_theta)[None, :]).ravel()
    return pts, wts


@dataclass(frozen=True, eq=False)
class GramSpec:
    """Moment matrix of the monomial basis under a weighted inner product.

    powers[i] is the exponent of the i-th basis monomial (0..degree on the
    disk, -degree..degree on the annulus).  moments[j, k] = <z^pj, z^pk>_w.
    """

    domain: DomainSpec
    weight: WeightSpec
    degree: int
    powers: tuple[int, ...]
    moments: np.ndarray
    used_quadrature: bool = False
    quadrature_error: float | None = None

    def scaled(self) -> tuple[np.ndarray, np.ndarray]:
        """Diagonal scaling D^-1/2 G D^-1/2 (monomial normalization) and D^-1/2."""
        d = np.sqrt(np.real(np.diag(self.moments)))
        if np.any(d <= 0):
            raise IllConditioned("Gram diagonal not positive")
        dinv = 1.0 / d
        return self.moments * np.outer(dinv, dinv), dinv


def _base_moment(domain: DomainSpec, base, a: int) -> float:
    """Integral of |z|^(2a) * base(z) over the domain; a may be negative on the annulus."""
    if isinstance(base, Constant):
        v, alpha = base.value, 0.0
    else:
        v, alpha = 1.0, base.alpha
    e = 2 * a + alpha + 2.0
    if domain.kind == "disk":
        if e <= 0:
            raise DivergentMoment(f"monomial power {a} not integrable on the disk")
        return v * 2.0 * math.pi / e
    r = domain.inner_radius
    if abs(e) <= 1e-12:
        return v * 2.0 * math.pi * math.log(1.0 / r)
    return v * 2.0 * math.pi * (1.0 - r**e) / e


def monomial_moments(
    d: DomainSpec, w: WeightSpec, degree: int, quad: QuadratureSpec = QuadratureSpec()
) -> GramSpec:
    """Gram matrix of monomials under the weight.

    Closed form when all weight factors are zero factors (the weight is
    |p(z)|^2 times the base): expand p and use the diagonal monomial moments.
    Pole factors inside or on the closure of the domain make the moments
    divergent and are rejected; pole factors strictly outside the domain fall
    back to quadrature, with the error estimated by halving the rule.
    """
    if degree < 0:
        raise ValidationError("degree must be nonnegative")
    if d.kind == "annulus":
        powers = tuple(range(-degree, degree + 1))
    else:
        powers = tuple(range(degree + 1))
    for f in w.poles:
        if d.in_closure(f.center):
            raise DivergentMoment(
                f"pole factor at {f.center} lies in the closed domain; monomial moments diverge"
            )
    n = len(powers)
    if not w.poles:
        p = Polynomial.from_roots(tuple((f.center, f.mult) for f in w.zeros))
        c = np.asarray(p.coeffs, dtype=complex)
        G = np.zeros((n, n), dtype=complex)
        base_pow = powers[0]
        for i in range(len(c)):
            for l in range(len(c)):
                if abs(c[i]) == 0.0 or abs(c[l]) == 0.0:
                    continue
                # <z^(pj+i), z^(pk+l)> nonzero only when pj+i == pk+l
                for j in range(n):
                    k = j + i - l
                    if 0 <= k < n:
                        G[j, k] += c[i] * np.conj(c[l]) * _base_moment(d, w.base, powers[j] + i)
        G = 0.5 * (G + G.conj().T)
        return GramSpec(d, w, degree, powers, G)

    pts, wts = build_rule(d, quad)
    half = QuadratureSpec(max(2, quad.radial_nodes // 2), max(2, quad.angular_nodes // 2))
    pts2, wts2 = build_rule(d, half)

    def assemble(points, weights):
        phi = np.array([weight_value(w, p) for p in points])
        V = points[:, None] ** np.array(powers)[None, :]
        return V.T @ (np.conj(V) * (weights * phi)[:, None])

    G = assemble(pts, wts)
    G2 = assemble(pts2, wts2)
    err = float(np.max(np.abs(G - G2)))
    G = 0.5 * (G + G.conj().T)
    return GramSpec(d, w, degree, powers, G, used_quadrature=True, quadrature_error=err)


def _factorized(g: GramSpec):
    S, dinv = g.scaled()
    eigs = np.linalg.eigvalsh(S)
    if eigs[0] <= 0:
        raise IllConditioned(f"scaled Gram not positive definite (min eig {eigs[0]:.3e})")
    cond = eigs[-1] / eigs[0]
    if cond > _COND_CAP:
        raise IllConditioned(f"scaled Gram condition {cond:.3e} exceeds {_COND_CAP:.0e}; lower the degree")
    return cho_factor(S, lower=True), dinv


def _basis(g: GramSpec, z: complex, dinv: np.ndarray) -> np.ndarray:
    return (z ** np.array(g.powers)) * dinv


def gram_kernel_eval(g: GramSpec, z, w) -> complex:
    """Oracle kernel value: sum over the orthonormalized monomial basis.

    K_N(z, w) = v(w)^H G^{-1} v(z) with v the monomial vector, computed
    through a Cholesky factorization of the diagonally scaled Gram matrix.
    """
    z = as_complex(z)
    w = as_complex(w)
    for p in (z, w):
        if not g.domain.contains(p):
            raise DomainViolation(f"oracle point {p} outside the domain")
    cho, dinv = _factorized(g)
    u = _basis(g, z, dinv)
    y = _basis(g, w, dinv)
    return complex(np.vdot(y, cho_solve(cho, u)))


def gram_kernel_values(g: GramSpec, zs: np.ndarray, w) -> np.ndarray:
    """Vectorized oracle evaluation over many z at fixed w."""
    w = as_complex(w)
    cho, dinv = _factorized(g)
    y = _basis(g, w, dinv)
    x = cho_solve(cho, y)
    U = np.asarray(zs, dtype=complex)[:, None] ** np.array(g.powers)[None, :]
    return (U * dinv[None, :]) @ np.conj(x)


def verify_reproducing(
    K: KernelExpr,
    w: WeightSpec,
    f: Polynomial,
    q: QuadratureSpec,
    z,
) -> float:
    """Residual |quadrature of f(u) K(z,u) w(u) dA_u - f(z)|.

    Drives the reproducing identity directly: the integrand uses
    K(z, u) = conj(K(u, z)), evaluated in batch along the u nodes.
    """
    z = as_complex(z)
    if not K.domain.contains(z):
        raise DomainViolation(f"evaluation point {z} outside the domain")
    pts, wts = build_rule(K.domain, q)
    phi = np.array([weight_value(w, p) for p in pts])
    kvals = np.conj(K.values_z(pts, z))
    fvals = np.array([f(p) for p in pts])
    integral = np.sum(wts * phi * fvals * kvals)
    return float(abs(integral - f(z)))
