"""Weight transforms: rational division, interior-zero augmentation, routing.

Two facts drive everything here.  Dividing a kernel by g(z) conj(g(w)) for a
rational g that keeps K/g holomorphic yields the kernel for the weight
multiplied by |g|^2.  Augmenting the weight by an interior zero factor
|z - c|^2 subtracts a rank-one term and divides by (z - c)(conj w - conj c),
leaving removable singularities only.  Composing these along the factor list
of a WeightSpec produces an evaluable expression tree for the full weight.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateCenter, DomainViolation, HolomorphyViolation, ValidationError
from .expr import (
    BaseKernel,
    DSTerm,
    DeflationSum,
    KernelExpr,
    RankOneDeflate,
    RationalDivide,
    render_formula,
)
from .model import DomainSpec, WeightSpec, as_complex

ITERATED = "iterated"
DIRECT_SUM = "direct_sum"


@dataclass(frozen=True)
class DecompositionPlan:
    """Ordered interior zero factors (center, multiplicity) and an evaluation mode.

    Iterated mode nests one rank-one deflation per unit of multiplicity;
    direct-sum mode builds the single explicit correction sum.  Both produce
    the same kernel and are kept as independent routes for cross-checking.
    """

    factors: tuple[tuple[complex, int], ...]
    mode: str = ITERATED

    def __post_init__(self) -> None:
        fs = tuple((as_complex(c), int(m)) for c, m in self.factors)
        object.__setattr__(self, "factors", fs)
        if self.mode not in (ITERATED, DIRECT_SUM):
            raise ValidationError(f"unknown decomposition mode {self.mode!r}")
        for c, m in fs:
            if m < 1:
                raise ValidationError("augmentation multiplicities must be positive integers")
        for i, (c, _) in enumerate(fs):
            for d, _ in fs[i + 1 :]:
                if abs(c - d) <= 1e-12:
                    raise ValidationError(f"duplicate augmentation center {c}")

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.factors)


def pole_divide(K: KernelExpr, g_factors, scale: complex = 1.0) -> KernelExpr:
    """Divide K by g(z) conj(g(w)) for rational g given by (center, mult) factors.

    Positive multiplicities are zeros of g and must not lie in the open
    domain, so that K/g stays holomorphic; negative multiplicities are poles
    of g (interior weight poles), where dividing multiplies by polynomials.
    """
    factors = tuple((as_complex(c), int(m)) for c, m in g_factors)
    dom = K.domain
    for c, m in factors:
        if m > 0 and dom.contains(c):
            raise HolomorphyViolation(f"g zero at {c} lies inside the domain; K/g would not be holomorphic")
    if not factors and scale == 1.0:
        return K
    return RationalDivide(K, factors, scale)


def zero_augment(K: KernelExpr, c) -> KernelExpr:
    """Kernel for the weight multiplied by |z - c|^2, c inside the domain."""
    c = as_complex(c)
    if not K.domain.contains(c):
        raise DomainViolation(f"augmentation center {c} is not inside the domain")
    d = K.value(c, c)
    if abs(d) <= 1e-14:
        raise DegenerateCenter(f"kernel diagonal at {c} is {d}")
    return RankOneDeflate(K, c)


def _direct_sum(K: KernelExpr, factors: tuple[tuple[complex, int], ...]) -> KernelExpr:
    if not factors:
        return K
    terms = []
    for j, (c_j, a_j) in enumerate(factors):
        for k in range(1, a_j + 1):
            head = tuple(factors[:j]) + ((c_j, k),)
            q_factors = []
            if a_j - k > 0:
                q_factors.append((c_j, a_j - k))
            q_factors.extend(factors[j + 1 :])
            aux = _direct_sum(K, tuple(q_factors))
            terms.append(DSTerm(aux, c_j, head))
    return DeflationSum(K, factors, tuple(terms))


def multi_zero_augment(K: KernelExpr, plan: DecompositionPlan) -> KernelExpr:
    """Augment the weight by prod |z - c_j|^(2 a_j) over the plan's factors."""
    dom = K.domain
    for c, _ in plan.factors:
        if not dom.contains(c):
            raise DomainViolation(f"augmentation center {c} is not inside the domain")
    if plan.mode == ITERATED:
        out = K
        for c, m in plan.factors:
            for _ in range(m):
                out = zero_augment(out, c)
        return out
    return _direct_sum(K, plan.factors)


def weighted_kernel(domain: DomainSpec, weight: WeightSpec, mode: str = ITERATED) -> KernelExpr:
    """Kernel expression for a full WeightSpec on a domain.

    Routing: the base weight picks the leaf kernel; zero factors centered
    inside the domain become augmentations, all other factors (outside zeros,
    every pole) become one rational division; pole centers inside the domain
    only multiply by polynomials and are always holomorphically safe.
    """
    expr: KernelExpr = BaseKernel(domain, weight.base)
    rational = [(f.center, f.mult) for f in weight.zeros if not domain.contains(f.center)]
    rational += [(f.center, -f.mult) for f in weight.poles]
    if rational:
        expr = pole_divide(expr, rational)
    interior = tuple((f.center, f.mult) for f in weight.zeros if domain.contains(f.center))
    if interior:
        expr = multi_zero_augment(expr, DecompositionPlan(interior, mode))
    return expr


def eval_with_limits(K: KernelExpr, z, w) -> complex:
    """Evaluate K at (z, w), taking exact limits at removable singularities.

    Points within 1e-8 of a deflation center are snapped to the center and
    the vanishing numerator orders are cancelled analytically, so values at
    and near centers are finite and continuous.
    """
    return K.value(as_complex(z), as_complex(w))


def to_formula(K: KernelExpr, format: str = "plain") -> str:
    """Render the expression tree as a formula string ('plain' or 'latex')."""
    return render_formula(K, format)
