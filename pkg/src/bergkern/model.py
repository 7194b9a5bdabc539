"""Data model: points, domains, rational-radial weights, polynomials, witnesses.

The weight class is deliberately small: a positive constant or a radial power
|z|^alpha (alpha > -2) as base, multiplied by |z - a|^(2m) zero factors and
divided by |z - b|^(2n) pole factors.  Everything downstream (kernel
transforms, the Gram oracle, zero certification) is defined against these
types, and every constructor validates so that later stages can assume
well-formed inputs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import (
    AlphaOutOfRange,
    DomainViolation,
    PoleAtPoint,
    ValidationError,
)

MAX_POLY_DEGREE = 64

ComplexLike = "complex | float | int | ComplexPoint"


@dataclass(frozen=True)
class ComplexPoint:
    """A point of the complex plane with finite coordinates."""

    re: float
    im: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ValidationError(f"non-finite point ({self.re}, {self.im})")

    @classmethod
    def from_complex(cls, z: complex) -> "ComplexPoint":
        return cls(float(z.real), float(z.imag))

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)


def as_complex(p) -> complex:
    """Normalize a point argument (complex, real, or ComplexPoint) to complex."""
    if isinstance(p, ComplexPoint):
        return p.z
    z = complex(p)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValidationError(f"non-finite point {p!r}")
    return z


@dataclass(frozen=True)
class Polynomial:
    """Immutable polynomial over C, coefficients in the monomial basis.

    coeffs[j] multiplies z^j.  Degree is capped so that augmentation plans
    stay in the regime the evaluation machinery is tested for.
    """

    coeffs: tuple[complex, ...]

    def __post_init__(self) -> None:
        cs = tuple(complex(c) for c in self.coeffs)
        while len(cs) > 1 and cs[-1] == 0:
            cs = cs[:-1]
        if not cs:
            cs = (0j,)
        if len(cs) - 1 > MAX_POLY_DEGREE:
            raise ValidationError(f"polynomial degree {len(cs) - 1} exceeds cap {MAX_POLY_DEGREE}")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def one(cls) -> "Polynomial":
        return cls((1.0 + 0j,))

    @classmethod
    def constant(cls, c: complex) -> "Polynomial":
        return cls((complex(c),))

    @classmethod
    def from_roots(cls, roots) -> "Polynomial":
        """Monic polynomial with the given (root, multiplicity) pairs."""
        p = cls.one()
        for root, mult in roots:
            r = as_complex(root)
            for _ in range(int(mult)):
                p = p * cls((-r, 1.0 + 0j))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        out = [0j] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(tuple(out))

    def derivative(self) -> "Polynomial":
        if len(self.coeffs) == 1:
            return Polynomial((0j,))
        return Polynomial(tuple(j * c for j, c in enumerate(self.coeffs) if j > 0))

    def conjugate(self) -> "Polynomial":
        """Polynomial with conjugated coefficients, so conj(p(w)) = pbar(conj(w))."""
        return Polynomial(tuple(c.conjugate() for c in self.coeffs))

    def taylor(self, z0: complex, n: int) -> tuple[complex, ...]:
        """Coefficients of p(z0 + t) in t, up to t^n, via synthetic division."""
        work = list(self.coeffs)
        out: list[complex] = []
        for _ in range(n + 1):
            if not work:
                out.append(0j)
                continue
            quot = [0j] * max(len(work) - 1, 0)
            rem = 0j
            for j in range(len(work) - 1, -1, -1):
                if j == len(work) - 1:
                    rem = work[j]
                else:
                    quot[j] = rem
                    rem = work[j] + rem * z0
            out.append(rem)
            work = quot
        return tuple(out)


@dataclass(frozen=True)
class DomainSpec:
    """Unit disk or annulus {r < |z| < 1}, optionally punctured.

    Punctures are removable for every weight this package builds, so they
    carry no weight data and do not change any kernel; they only matter for
    membership tests.
    """

    kind: str
    inner_radius: float = 0.0
    punctures: tuple[complex, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in ("disk", "annulus"):
            raise ValidationError(f"unknown domain kind {self.kind!r}")
        if self.kind == "annulus":
            if not (0.0 < self.inner_radius < 1.0):
                raise ValidationError(f"annulus inner radius {self.inner_radius} not in (0, 1)")
        elif self.inner_radius != 0.0:
            raise ValidationError("disk takes no inner radius")
        pts = tuple(as_complex(p) for p in self.punctures)
        object.__setattr__(self, "punctures", pts)
        for p in pts:
            if not self._contains_unpunctured(p):
                raise DomainViolation(f"puncture {p} outside the open domain")

    @classmethod
    def disk(cls, punctures=()) -> "DomainSpec":
        return cls("disk", punctures=tuple(punctures))

    @classmethod
    def annulus(cls, inner_radius: float, punctures=()) -> "DomainSpec":
        return cls("annulus", float(inner_radius), tuple(punctures))

    def _contains_unpunctured(self, z: complex) -> bool:
        r = abs(z)
        if self.kind == "disk":
            return r < 1.0
        return self.inner_radius < r < 1.0

    def contains(self, p) -> bool:
        """Open-domain membership; punctures are excluded."""
        z = as_complex(p)
        if any(z == q for q in self.punctures):
            return False
        return self._contains_unpunctured(z)

    def in_closure(self, p) -> bool:
        z = as_complex(p)
        r = abs(z)
        if self.kind == "disk":
            return r <= 1.0
        return self.inner_radius <= r <= 1.0

    def boundary_distance(self, p) -> float:
        """Distance from p to the domain boundary (punctures ignored)."""
        r = abs(as_complex(p))
        if self.kind == "disk":
            return 1.0 - r
        return min(1.0 - r, r - self.inner_radius)

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.kind == "annulus":
            d["inner_radius"] = self.inner_radius
        if self.punctures:
            d["punctures"] = [{"re": p.real, "im": p.imag} for p in self.punctures]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "DomainSpec":
        kind = d.get("kind")
        punctures = tuple(complex(q["re"], q.get("im", 0.0)) for q in d.get("punctures", []))
        if kind == "disk":
            return cls.disk(punctures)
        if kind == "annulus":
            return cls.annulus(d.get("inner_radius", 0.0), punctures)
        raise ValidationError(f"unknown domain kind {kind!r}")


@dataclass(frozen=True)
class Constant:
    """Constant base weight with positive value."""

    value: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.value) and self.value > 0):
            raise ValidationError(f"constant base weight must be positive, got {self.value}")

    def __call__(self, z: complex) -> float:
        return self.value


@dataclass(frozen=True)
class RadialPower:
    """Radial base weight |z|^alpha; alpha > -2 keeps every moment finite."""

    alpha: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.alpha) or self.alpha <= -2.0:
            raise AlphaOutOfRange(f"alpha must exceed -2, got {self.alpha}")

    def __call__(self, z: complex) -> float:
        return abs(z) ** self.alpha


BaseWeight = Constant | RadialPower


@dataclass(frozen=True)
class Factor:
    """One |z - center|^(2*mult) factor of a weight."""

    center: complex
    mult: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", as_complex(self.center))
        if not isinstance(self.mult, int) or self.mult < 1:
            raise ValidationError(f"factor multiplicity must be a positive integer, got {self.mult}")


def _check_distinct(factors: tuple[Factor, ...], label: str) -> None:
    for i, f in enumerate(factors):
        for g in factors[i + 1 :]:
            if abs(f.center - g.center) <= 1e-12:
                raise ValidationError(f"{label} centers {f.center} and {g.center} coincide")


@dataclass(frozen=True)
class WeightSpec:
    """Weight base(z) * prod |z-a|^(2m) / prod |z-b|^(2n) on a domain."""

    base: BaseWeight = field(default_factory=Constant)
    zeros: tuple[Factor, ...] = ()
    poles: tuple[Factor, ...] = ()

    def __post_init__(self) -> None:
        zs = tuple(f if isinstance(f, Factor) else Factor(*f) for f in self.zeros)
        ps = tuple(f if isinstance(f, Factor) else Factor(*f) for f in self.poles)
        object.__setattr__(self, "zeros", zs)
        object.__setattr__(self, "poles", ps)
        _check_distinct(zs, "zero factor")
        _check_distinct(ps, "pole factor")
        for f in zs:
            for g in ps:
                if abs(f.center - g.center) <= 1e-12:
                    raise ValidationError(f"zero and pole factors share the center {f.center}")

    def is_trivial(self) -> bool:
        return not self.zeros and not self.poles and isinstance(self.base, Constant) and self.base.value == 1.0

    def to_dict(self) -> dict:
        if isinstance(self.base, Constant):
            base = {"kind": "constant", "value": self.base.value}
        else:
            base = {"kind": "radial", "alpha": self.base.alpha}
        return {
            "base": base,
            "zeros": [{"re": f.center.real, "im": f.center.imag, "mult": f.mult} for f in self.zeros],
            "poles": [{"re": f.center.real, "im": f.center.imag, "mult": f.mult} for f in self.poles],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WeightSpec":
        b = d.get("base", {"kind": "constant", "value": 1.0})
        kind = b.get("kind")
        if kind == "constant":
            base: BaseWeight = Constant(float(b.get("value", 1.0)))
        elif kind == "radial":
            base = RadialPower(float(b["alpha"]))
        else:
            raise ValidationError(f"unknown base weight kind {kind!r}")
        zeros = tuple(Factor(complex(f["re"], f.get("im", 0.0)), int(f.get("mult", 1))) for f in d.get("zeros", []))
        poles = tuple(Factor(complex(f["re"], f.get("im", 0.0)), int(f.get("mult", 1))) for f in d.get("poles", []))
        return cls(base, zeros, poles)


def weight_value(weight: WeightSpec, p) -> float:
    """Pointwise weight value; raises PoleAtPoint exactly at a pole center."""
    z = as_complex(p)
    for f in weight.poles:
        if z == f.center:
            raise PoleAtPoint(f"weight has a pole at {z}")
    v = weight.base(z)
    for f in weight.zeros:
        v *= abs(z - f.center) ** (2 * f.mult)
    for f in weight.poles:
        v /= abs(z - f.center) ** (2 * f.mult)
    return v


@dataclass(frozen=True)
class ZeroWitness:
    """A certified kernel zero: K(z, w) = 0 with winding and order evidence."""

    z: complex
    w: complex
    residual: float
    winding: int
    order: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "z", as_complex(self.z))
        object.__setattr__(self, "w", as_complex(self.w))
        if self.residual < 0:
            raise ValidationError("residual must be nonnegative")
        if self.winding < 1:
            raise ValidationError("witness winding must be >= 1")
        if self.order < 1:
            raise ValidationError("witness order must be >= 1")

    def to_dict(self) -> dict:
        return {
            "re_z": self.z.real,
            "im_z": self.z.imag,
            "re_w": self.w.real,
            "im_w": self.w.imag,
            "residual": self.residual,
            "winding": self.winding,
            "order": self.order,
        }


def dumps_config(domain: DomainSpec, weight: WeightSpec, **extra) -> str:
    """Canonical JSON for a (domain, weight) pair plus extra command fields."""
    d = {"domain": domain.to_dict(), "weight": weight.to_dict()}
    d.update(extra)
    return json.dumps(d, indent=2, sort_keys=True)
