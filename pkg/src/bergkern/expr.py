"""Immutable kernel expression trees.

A kernel is a tree of nodes, each sesqui-holomorphic (holomorphic in z,
conjugate-holomorphic in w) and Hermitian: K(z, w) = conj(K(w, z)).  Leaves
are closed-form or series base kernels; interior nodes divide by rational
factors of the weight, deflate a rank-one term to absorb an interior weight
zero, or pull the kernel back along a disk automorphism.

Evaluation propagates truncated Taylor jets (see jets.py).  Points within
EPS_SING of a deflation center are snapped to the center and the vanishing
numerator orders are cancelled exactly by coefficient shifts, so removable
singularities evaluate to their limits instead of 0/0.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import jets as J
from ._series import SeriesTruncation, annulus_jet, annulus_values, auto_n_max
from .errors import (
    DegenerateCenter,
    DomainViolation,
    InvalidAutomorphism,
    ValidationError,
)
from .model import BaseWeight, Constant, DomainSpec, Polynomial, RadialPower, as_complex

EPS_SING = 1e-8
DEGENERATE_TOL = 1e-14
_ARRAY_FALLBACK = 1e-6


def _fmt_num(c: complex) -> str:
    if abs(c.imag) < 1e-14:
        return f"{c.real:.10g}"
    return f"{c:.10g}"


def _lin(var: str, c: complex, minus: str = "-", plus: str = "+") -> str:
    if c == 0:
        return var
    if abs(c.imag) < 1e-14 and c.real < 0:
        return f"({var}{plus}{_fmt_num(-c)})"
    if abs(c.imag) < 1e-14:
        return f"({var}{minus}{_fmt_num(c)})"
    return f"({var}{minus}({_fmt_num(c)}))"


def _factor_str(var: str, factors, fmt: str) -> str:
    parts = []
    for c, m in factors:
        s = _lin(var, c)
        if m > 1:
            s = f"{s}^{m}" if fmt == "latex" else f"{s}^{m}"
        parts.append(s)
    joiner = "" if fmt == "latex" else "*"
    return joiner.join(parts) if parts else "1"


class KernelExpr:
    """Base class for kernel nodes.  Subclasses implement jet() and children()."""

    def jet(self, z, w, nz: int, nw: int) -> np.ndarray:
        raise NotImplementedError

    def children(self) -> tuple["KernelExpr", ...]:
        return ()

    def formula_body(self, child_names: list[str], fmt: str) -> str:
        raise NotImplementedError

    @property
    def domain(self) -> DomainSpec:
        raise NotImplementedError

    def value(self, z, w) -> complex:
        return complex(self.jet(as_complex(z), as_complex(w), 0, 0)[0, 0])

    def dz(self, z, w) -> complex:
        """Holomorphic derivative in the first argument."""
        return complex(self.jet(as_complex(z), as_complex(w), 1, 0)[1, 0])

    def dwbar(self, z, w) -> complex:
        """Derivative in conj(w)."""
        return complex(self.jet(as_complex(z), as_complex(w), 0, 1)[0, 1])

    def values_z(self, zs, w) -> np.ndarray:
        """Vectorized K(zs[i], w); falls back to scalar evaluation."""
        w = as_complex(w)
        return np.array([self.value(z, w) for z in np.asarray(zs, dtype=complex)])

    def centers(self) -> tuple[complex, ...]:
        """All deflation centers in the tree (removable-singularity points)."""
        out: tuple[complex, ...] = ()
        for ch in self.children():
            out += ch.centers()
        return out


@dataclass(frozen=True)
class BaseKernel(KernelExpr):
    """Unweighted-by-transforms starting kernel for a (domain, base weight) pair.

    Disk: 1/(v pi (1 - z conj w)^2), times the radial correction
    (1 + a/2 - (a/2) z conj w) for base |z|^a.  Annulus: bilateral monomial
    series; the cutoff grows with the evaluation radius unless pinned by trunc.
    """

    spec: DomainSpec
    base: BaseWeight
    trunc: SeriesTruncation | None = None

    def __post_init__(self) -> None:
        if self.spec.kind == "disk" and isinstance(self.base, RadialPower) and self.base.alpha <= -2:
            raise ValidationError("radial exponent out of range")  # pragma: no cover

    @property
    def domain(self) -> DomainSpec:
        return self.spec

    def _alpha_const(self) -> tuple[float, float]:
        if isinstance(self.base, Constant):
            return 0.0, self.base.value
        return self.base.alpha, 1.0

    def jet(self, z, w, nz: int, nw: int) -> np.ndarray:
        z = as_complex(z)
        w = as_complex(w)
        alpha, const = self._alpha_const()
        if self.spec.kind == "disk":
            if abs(z * w.conjugate()) >= 1.0:
                raise DomainViolation(f"disk kernel evaluated at |z conj(w)| = {abs(z*w.conjugate())} >= 1")
            t = J.jet_mul(J.jet_z(z, nz, nw), J.jet_wbar(w.conjugate(), nz, nw))
            u = J.jet_const(1.0, nz, nw) - t
            rec = J.jet_reciprocal(u)
            K = J.jet_mul(rec, rec) / (math.pi * const)
            if isinstance(self.base, RadialPower):
                corr = J.jet_const(1.0 + alpha / 2.0, nz, nw) - (alpha / 2.0) * t
                K = J.jet_mul(K, corr)
            return K
        n_max = self.trunc.n_max if self.trunc is not None else auto_n_max(self.spec.inner_radius, z, w, alpha)
        return annulus_jet(self.spec.inner_radius, z, w, nz, nw, n_max, alpha, const)

    def values_z(self, zs, w) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        w = as_complex(w)
        alpha, const = self._alpha_const()
        if self.spec.kind == "disk":
            t = zs * w.conjugate()
            if np.any(np.abs(t) >= 1.0):
                raise DomainViolation("disk kernel evaluated at |z conj(w)| >= 1")
            K = 1.0 / (math.pi * const * (1.0 - t) ** 2)
            if isinstance(self.base, RadialPower):
                K = K * (1.0 + alpha / 2.0 - (alpha / 2.0) * t)
            return K
        if zs.size == 0:
            return np.zeros(0, dtype=complex)
        r = self.spec.inner_radius
        if self.trunc is not None:
            n_max = self.trunc.n_max
        else:
            i_hi = int(np.argmax(np.abs(zs)))
            i_lo = int(np.argmin(np.abs(zs)))
            n_max = max(auto_n_max(r, zs[i_hi], w, alpha), auto_n_max(r, zs[i_lo], w, alpha))
        return annulus_values(r, zs, w, n_max, alpha, const)

    def formula_body(self, child_names: list[str], fmt: str) -> str:
        alpha, const = self._alpha_const()
        if self.spec.kind == "disk":
            if fmt == "latex":
                core = r"\frac{1}{%s\pi (1 - z \overline{w})^{2}}" % (_fmt_num(const) + " " if const != 1 else "")
                if isinstance(self.base, RadialPower):
                    core = (
                        r"\left(%s - %s z \overline{w}\right) \cdot " % (_fmt_num(1 + alpha / 2), _fmt_num(alpha / 2))
                        + core
                    )
                return core
            core = f"1/({_fmt_num(const)+'*' if const != 1 else ''}pi*(1 - z*conj(w))^2)"
            if isinstance(self.base, RadialPower):
                core = f"({_fmt_num(1 + alpha / 2)} - {_fmt_num(alpha / 2)}*z*conj(w))*{core}"
            return core
        r = self.spec.inner_radius
        wt = "" if isinstance(self.base, Constant) and const == 1 else f", weight {_fmt_num(const)}*|z|^{_fmt_num(alpha)}"
        if fmt == "latex":
            return (
                r"\sum_{n=-\infty}^{\infty} \frac{z^{n} \overline{w}^{n}}{\lVert z^{n}\rVert^{2}}"
                + r"\quad \text{on } %s < |z| < 1%s" % (_fmt_num(r), wt)
            )
        return f"sum_n z^n*conj(w)^n / norm2_n  on {_fmt_num(r)} < |z| < 1{wt}"


@dataclass(frozen=True)
class RationalDivide(KernelExpr):
    """inner(z, w) / (g(z) * conj(g(w))) for a rational g.

    g is stored in factored form: scale * prod (z-a)^m over factors with
    m > 0, divided by prod (z-b)^|m| over factors with m < 0.  Negative
    multiplicities absorb weight pole factors, where dividing by g multiplies
    the kernel by polynomials and introduces no singularity.
    """

    inner: KernelExpr
    factors: tuple[tuple[complex, int], ...]
    scale: complex = 1.0 + 0j

    def __post_init__(self) -> None:
        fs = tuple((as_complex(c), int(m)) for c, m in self.factors)
        object.__setattr__(self, "factors", fs)
        object.__setattr__(self, "scale", as_complex(self.scale))
        if self.scale == 0:
            raise ValidationError("rational divide scale must be nonzero")
        for c, m in fs:
            if m == 0:
                raise ValidationError("factor multiplicity must be nonzero")
        num = Polynomial.from_roots([(c, m) for c, m in fs if m > 0]) * Polynomial.constant(self.scale)
        den = Polynomial.from_roots([(c, -m) for c, m in fs if m < 0])
        object.__setattr__(self, "_num", num)
        object.__setattr__(self, "_den", den)
        object.__setattr__(self, "_num_bar", num.conjugate())
        object.__setattr__(self, "_den_bar", den.conjugate())

    @property
    def domain(self) -> DomainSpec:
        return self.inner.domain

    def children(self) -> tuple[KernelExpr, ...]:
        return (self.inner,)

    def jet(self, z, w, nz: int, nw: int) -> np.ndarray:
        z = as_complex(z)
        w = as_complex(w)
        Ji = self.inner.jet(z, w, nz, nw)
        num: Polynomial = self._num  # type: ignore[attr-defined]
        den: Polynomial = self._den  # type: ignore[attr-defined]
        nz_t = np.asarray(num.taylor(z, nz), dtype=complex)
        nw_t = np.asarray(self._num_bar.taylor(w.conjugate(), nw), dtype=complex)  # type: ignore[attr-defined]
        dz_t = np.asarray(den.taylor(z, nz), dtype=complex)
        dw_t = np.asarray(self._den_bar.taylor(w.conjugate(), nw), dtype=complex)  # type: ignore[attr-defined]
        out = J.jet_mul(Ji, J.jet_outer(dz_t, dw_t))
        return J.jet_div(out, J.jet_outer(nz_t, nw_t))

    def values_z(self, zs, w) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        w = as_complex(w)
        vals = self.inner.values_z(zs, w)
        num: Polynomial = self._num  # type: ignore[attr-defined]
        den: Polynomial = self._den  # type: ignore[attr-defined]
        num_z = np.array([num(z) for z in zs])
        den_z = np.array([den(z) for z in zs])
        nb = self._num_bar(w.conjugate())  # type: ignore[attr-defined]
        db = self._den_bar(w.conjugate())  # type: ignore[attr-defined]
        return vals * den_z * db / (num_z * nb)

    def centers(self) -> tuple[complex, ...]:
        return self.inner.centers()

    def formula_body(self, child_names: list[str], fmt: str) -> str:
        name = child_names[0]
        wvar = r"\overline{w}" if fmt == "latex" else "conj(w)"
        pos = [(c, m) for c, m in self.factors if m > 0]
        neg = [(c, -m) for c, m in self.factors if m < 0]
        s2 = abs(self.scale) ** 2
        num_parts = []
        if neg:
            num_parts.append(_factor_str("z", neg, fmt))
            num_parts.append(_factor_str(wvar, [(c.conjugate(), m) for c, m in neg], fmt))
        den_parts = []
        if s2 != 1.0:
            den_parts.append(_fmt_num(s2))
        if pos:
            den_parts.append(_factor_str("z", pos, fmt))
            den_parts.append(_factor_str(wvar, [(c.conjugate(), m) for c, m in pos], fmt))
        joiner = "" if fmt == "latex" else "*"
        head = f"{name}(z,w)"
        if num_parts:
            head = f"{head}{joiner if fmt != 'latex' else ' '}{joiner.join(num_parts)}"
        if not den_parts:
            return head
        den = joiner.join(den_parts)
        if fmt == "latex":
            return r"\frac{%s}{%s}" % (head, den)
        return f"{head} / ({den})"


def _linear_taylor(v0: complex, n: int) -> np.ndarray:
    t = np.zeros(n + 1, dtype=complex)
    t[0] = v0
    if n >= 1:
        t[1] = 1.0
    return t


@dataclass(frozen=True)
class RankOneDeflate(KernelExpr):
    """One interior-zero augmentation step.

    Represents (inner(z,w) - inner(z,c) inner(c,w) / inner(c,c))
    divided by (z - c)(conj(w) - conj(c)).  The numerator vanishes
    identically on z = c and w = c, so both singular factors are removable;
    jets cancel them exactly when an argument is snapped to the center.
    """

    inner: KernelExpr
    center: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", as_complex(self.center))

    @property
    def domain(self) -> DomainSpec:
        return self.inner.domain

    def children(self) -> tuple[KernelExpr, ...]:
        return (self.inner,)

    def centers(self) -> tuple[complex, ...]:
        return self.inner.centers() + (self.center,)

    def _diag(self) -> complex:
        d = self.inner.value(self.center, self.center)
        if abs(d) <= DEGENERATE_TOL:
            raise DegenerateCenter(f"kernel diagonal at augmentation center {self.center} is {d}")
        return d

    def jet(self, z, w, nz: int, nw: int) -> np.ndarray:
        z = as_complex(z)
        w = as_complex(w)
        c = self.center
        z_at = abs(z - c) <= EPS_SING
        w_at = abs(w - c) <= EPS_SING
        z0 = c if z_at else z
        w0 = c if w_at else w
        kz = 1 if z_at else 0
        kw = 1 if w_at else 0
        need_z = nz + kz
        need_w = nw + kw
        d = self._diag()
        Ji = self.inner.jet(z0, w0, need_z, need_w)
        A = self.inner.jet(z0, c, need_z, 0)[:, 0]
        B = self.inner.jet(c, w0, 0, need_w)[0, :]
        N = Ji - np.outer(A, B) / d
        N = J.jet_shift(N, kz, kw)
        den_z = _linear_taylor(1.0, nz) if z_at else _linear_taylor(z0 - c, nz)
        den_w = _linear_taylor(1.0, nw) if w_at else _linear_taylor(w0.conjugate() - c.conjugate(), nw)
        if z_at:
            den_z[1:] = 0.0
        if w_at:
            den_w[1:] = 0.0
        return J.jet_div(N, J.jet_outer(den_z, den_w))

    def values_z(self, zs, w) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        w = as_complex(w)
        c = self.center
        if abs(w - c) <= _ARRAY_FALLBACK:
            return super().values_z(zs, w)
        d = self._diag()
        vals = self.inner.values_z(zs, w)
        A = self.inner.values_z(zs, c)
        B = self.inner.value(c, w)
        out = (vals - A * B / d) / ((zs - c) * (w.conjugate() - c.conjugate()))
        near = np.abs(zs - c) <= _ARRAY_FALLBACK
        if np.any(near):
            for i in np.nonzero(near)[0]:
                out[i] = self.value(zs[i], w)
        return out

    def formula_body(self, child_names: list[str], fmt: str) -> str:
        name = child_names[0]
        c = self.center
        cs = _fmt_num(c)
        cb = _fmt_num(c.conjugate())
        if fmt == "latex":
            num = r"%s(z,w) - \frac{%s(z,%s)\,%s(%s,w)}{%s(%s,%s)}" % (name, name, cs, name, cs, name, cs, cs)
            return r"\frac{%s}{%s%s}" % (num, _lin("z", c), _lin(r"\overline{w}", c.conjugate()))
        num = f"{name}(z,w) - {name}(z,{cs})*{name}({cs},w)/{name}({cs},{cs})"
        return f"({num}) / ({_lin('z', c)}*{_lin('conj(w)', c.conjugate())})"


@dataclass(frozen=True)
class DSTerm:
    """One subtracted term of the direct multi-center augmentation formula."""

    aux: KernelExpr
    center: complex
    head: tuple[tuple[complex, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", as_complex(self.center))
        object.__setattr__(self, "head", tuple((as_complex(c), int(m)) for c, m in self.head))


@dataclass(frozen=True)
class DeflationSum(KernelExpr):
    """Direct-sum form of multi-center zero augmentation.

    With p(z) = prod (z-c_j)^(a_j) over factors, the kernel is

        [ inner(z,w) - sum_t aux_t(z,c_t) q_t(z) conj(aux_t(w,c_t) q_t(w)) / d_t ]
        / ( p(z) conj(p(w)) ),

    where q_t = p / p_head(t) and d_t = aux_t(c_t, c_t).  The bracket
    vanishes to order a_i in (z - c_i) and in (conj w - conj c_i) for every
    center, so the quotient extends across all of them.
    """

    inner: KernelExpr
    factors: tuple[tuple[complex, int], ...]
    terms: tuple[DSTerm, ...]

    def __post_init__(self) -> None:
        fs = tuple((as_complex(c), int(m)) for c, m in self.factors)
        object.__setattr__(self, "factors", fs)
        for c, m in fs:
            if m < 1:
                raise ValidationError("augmentation multiplicities must be positive")

    @property
    def domain(self) -> DomainSpec:
        return self.inner.domain

    def children(self) -> tuple[KernelExpr, ...]:
        return (self.inner,) + tuple(t.aux for t in self.terms)

    def centers(self) -> tuple[complex, ...]:
        return self.inner.centers() + tuple(c for c, _ in self.factors)

    def _q_factors(self, term: DSTerm) -> list[tuple[complex, int]]:
        head = {c: m for c, m in term.head}
        out = []
        for c, m in self.factors:
            rem = m - head.get(c, 0)
            if rem > 0:
                out.append((c, rem))
        return out

    def jet(self, z, w, nz: int, nw: int) -> np.ndarray:
        z = as_complex(z)
        w = as_complex(w)
        kz = kw = 0
        z0, w0 = z, w
        for c, m in self.factors:
            if abs(z - c) <= EPS_SING:
                z0, kz = c, m
            if abs(w - c) <= EPS_SING:
                w0, kw = c, m
        need_z = nz + kz
        need_w = nw + kw
        N = self.inner.jet(z0, w0, need_z, need_w)
        for t in self.terms:
            d = t.aux.value(t.center, t.center)
            if abs(d) <= DEGENERATE_TOL:
                raise DegenerateCenter(f"auxiliary kernel diagonal at {t.center} is {d}")
            q = Polynomial.from_roots(self._q_factors(t))
            Az = J.taylor1_mul(
                t.aux.jet(z0, t.center, need_z, 0)[:, 0], np.asarray(q.taylor(z0, need_z)), need_z
            )
            Bw = J.taylor1_mul(
                t.aux.jet(t.center, w0, 0, need_w)[0, :],
                np.asarray(q.conjugate().taylor(w0.conjugate(), need_w)),
                need_w,
            )
            N = N - np.outer(Az, Bw) / d
        N = J.jet_shift(N, kz, kw)
        # regular polynomial parts after the exact shifts
        pz_factors = [(c, m) for c, m in self.factors if not (kz and c == z0)]
        pw_factors = [(c, m) for c, m in self.factors if not (kw and c == w0)]
        pz = np.asarray(Polynomial.from_roots(pz_factors).taylor(z0, nz), dtype=complex)
        pw = np.asarray(
            Polynomial.from_roots(pw_factors).conjugate().taylor(w0.conjugate(), nw), dtype=complex
        )
        return J.jet_div(N, J.jet_outer(pz, pw))

    def formula_body(self, child_names: list[str], fmt: str) -> str:
        name = child_names[0]
        wvar = r"\overline{w}" if fmt == "latex" else "conj(w)"
        pz = _factor_str("z", self.factors, fmt)
        pw = _factor_str(wvar, [(c.conjugate(), m) for c, m in self.factors], fmt)
        terms = []
        for t, aux_name in zip(self.terms, child_names[1:]):
            cs = _fmt_num(t.center)
            hz = _factor_str("z", t.head, fmt)
            hw = _factor_str(wvar, [(c.conjugate(), m) for c, m in t.head], fmt)
            if fmt == "latex":
                terms.append(
                    r"\frac{%s(z,%s)\,%s(%s,w)}{%s\,%s\,%s(%s,%s)}" % (aux_name, cs, aux_name, cs, hz, hw, aux_name, cs, cs)
                )
            else:
                terms.append(f"{aux_name}(z,{cs})*{aux_name}({cs},w)/({hz}*{hw}*{aux_name}({cs},{cs}))")
        if fmt == "latex":
            return r"\frac{%s(z,w)}{%s %s} - " % (name, pz, pw) + " - ".join(terms)
        out = f"{name}(z,w) / ({pz}*{pw})"
        if terms:
            out += " - " + " - ".join(terms)
        return out


@dataclass(frozen=True)
class MobiusMap:
    """Disk automorphism z -> e^(i theta) (z - a) / (1 - conj(a) z)."""

    a: complex = 0j
    theta: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", as_complex(self.a))
        if abs(self.a) >= 1.0:
            raise InvalidAutomorphism(f"|a| = {abs(self.a)} >= 1")
        if not math.isfinite(self.theta):
            raise InvalidAutomorphism("theta must be finite")

    def __call__(self, z: complex) -> complex:
        return cmath.exp(1j * self.theta) * (z - self.a) / (1.0 - self.a.conjugate() * z)

    def deriv(self, z: complex) -> complex:
        return cmath.exp(1j * self.theta) * (1.0 - abs(self.a) ** 2) / (1.0 - self.a.conjugate() * z) ** 2

    def inverse(self, zeta: complex) -> complex:
        zp = cmath.exp(-1j * self.theta) * zeta
        return (zp + self.a) / (1.0 + self.a.conjugate() * zp)

    def taylor(self, z0: complex, n: int) -> np.ndarray:
        num = np.zeros(n + 1, dtype=complex)
        num[0] = z0 - self.a
        if n >= 1:
            num[1] = 1.0
        den = np.zeros(n + 1, dtype=complex)
        den[0] = 1.0 - self.a.conjugate() * z0
        if n >= 1:
            den[1] = -self.a.conjugate()
        return cmath.exp(1j * self.theta) * J.taylor1_mul(num, J.taylor1_reciprocal(den, n), n)

    def conj_taylor(self, wbar0: complex, n: int) -> np.ndarray:
        """Taylor of conj(f(w)) as a function of conj(w)."""
        num = np.zeros(n + 1, dtype=complex)
        num[0] = wbar0 - self.a.conjugate()
        if n >= 1:
            num[1] = 1.0
        den = np.zeros(n + 1, dtype=complex)
        den[0] = 1.0 - self.a * wbar0
        if n >= 1:
            den[1] = -self.a
        return cmath.exp(-1j * self.theta) * J.taylor1_mul(num, J.taylor1_reciprocal(den, n), n)


@dataclass(frozen=True)
class MobiusTransport(KernelExpr):
    """Pullback f'(z) inner(f(z), f(w)) conj(f'(w)) along a disk automorphism."""

    inner: KernelExpr
    map: MobiusMap

    def __post_init__(self) -> None:
        dom = self.inner.domain
        if dom.kind != "disk" and self.map.a != 0:
            raise DomainViolation("non-rotation transport is only defined for disk kernels")

    @property
    def domain(self) -> DomainSpec:
        return self.inner.domain

    def children(self) -> tuple[KernelExpr, ...]:
        return (self.inner,)

    def centers(self) -> tuple[complex, ...]:
        return tuple(self.map.inverse(c) for c in self.inner.centers())

    def jet(self, z, w, nz: int, nw: int) -> np.ndarray:
        z = as_complex(z)
        w = as_complex(w)
        f = self.map
        fz = f.taylor(z, nz + 1)
        fb = f.conj_taylor(w.conjugate(), nw + 1)
        u = fz[: nz + 1].copy()
        u[0] = 0.0
        v = fb[: nw + 1].copy()
        v[0] = 0.0
        Ji = self.inner.jet(fz[0], fb[0].conjugate(), nz, nw)
        composed = J.jet_compose(Ji, u, v)
        fp = np.array([(k + 1) * fz[k + 1] for k in range(nz + 1)])
        gp = np.array([(k + 1) * fb[k + 1] for k in range(nw + 1)])
        return J.jet_mul(composed, J.jet_outer(fp, gp))

    def values_z(self, zs, w) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        w = as_complex(w)
        f = self.map
        fzs = np.array([f(z) for z in zs])
        fps = np.array([f.deriv(z) for z in zs])
        inner_vals = self.inner.values_z(fzs, f(w))
        return fps * inner_vals * f.deriv(w).conjugate()

    def formula_body(self, child_names: list[str], fmt: str) -> str:
        name = child_names[0]
        a, th = _fmt_num(self.map.a), _fmt_num(self.map.theta)
        if fmt == "latex":
            return r"f'(z)\, %s(f(z), f(w))\, \overline{f'(w)}, \quad f(z) = e^{i %s}\frac{z - %s}{1 - \overline{%s} z}" % (
                name,
                th,
                a,
                a,
            )
        return f"f'(z)*{name}(f(z),f(w))*conj(f'(w))  with f(z) = exp(i*{th})*(z-{a})/(1-conj({a})*z)"


def render_formula(K: KernelExpr, fmt: str = "plain") -> str:
    """Human-checkable formula for the whole tree, one definition per node."""
    if fmt not in ("plain", "latex"):
        raise ValidationError(f"unknown formula format {fmt!r}")
    names: dict[int, str] = {}
    defs: list[str] = []

    def visit(node: KernelExpr) -> str:
        if id(node) in names:
            return names[id(node)]
        child_names = [visit(ch) for ch in node.children()]
        sym = f"K{len(defs) + 1}" if fmt == "plain" else f"K_{{{len(defs) + 1}}}"
        names[id(node)] = sym
        defs.append(f"{sym}(z,w) = {node.formula_body(child_names, fmt)}")
        return sym

    top = visit(K)
    if fmt == "latex":
        lines = [d for d in defs]
        return f"{top}(z,w)" + r" \quad\text{where}\quad " + r" ;\; ".join(lines)
    body = "\n  ".join(reversed(defs))
    return f"{top}(z,w)\n  where\n  {body}"
