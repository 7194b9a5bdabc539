"""Weight-transform engine: rational division, deflation, routing, formulas.

Oracle values frozen from the degree-60 Gram construction (built and checked
before this engine): K for weight |z-0.5|^2 at (0.2, 0.1), and K for weight
|z-0.4|^2 |z+0.3|^2 at (0.25+0.1i, -0.2).
"""

import math

import numpy as np
import pytest

from bergkern import (
    DIRECT_SUM,
    ITERATED,
    Constant,
    DecompositionPlan,
    DomainSpec,
    DomainViolation,
    Factor,
    HolomorphyViolation,
    RadialPower,
    ValidationError,
    WeightSpec,
    base_kernel,
    disk_kernel,
    disk_mobius_power_kernel,
    disk_radial_kernel,
    eval_with_limits,
    multi_zero_augment,
    pole_divide,
    to_formula,
    weighted_kernel,
    zero_augment,
)

GRAM_FROZEN_HALF = 0.720879824223445  # weight |z-0.5|^2 at (0.2, 0.1)
GRAM_FROZEN_PAIR = 0.8974804862289879 - 0.0016139813935229959j  # |z-0.4|^2 |z+0.3|^2 at (0.25+0.1i, -0.2)

DISK = DomainSpec.disk()


class TestPoleDivide:
    def test_outside_zero_factor_identity(self):
        # weight |z-2|^2: K_new(z,w) (z-2)(conj(w)-2) = K(z,w)
        K = pole_divide(base_kernel(DISK), ((2.0, 1),))
        for z, w in [(0.3, 0.1), (0.5 - 0.2j, -0.4 + 0.3j)]:
            lhs = K.value(z, w) * (z - 2.0) * (np.conjugate(w) - 2.0)
            assert lhs == pytest.approx(disk_kernel(z, w), rel=1e-14)

    def test_interior_zero_of_g_rejected(self):
        with pytest.raises(HolomorphyViolation):
            pole_divide(base_kernel(DISK), ((0.5, 1),))

    def test_negative_multiplicity_multiplies(self):
        # weight |z-c|^(-2): K_new(z,w) = (z-c) K(z,w) (conj(w)-conj(c))
        c = 0.4
        K = pole_divide(base_kernel(DISK), ((c, -1),))
        z, w = 0.2 + 0.1j, -0.3
        expected = (z - c) * disk_kernel(z, w) * (np.conjugate(w) - c)
        assert K.value(z, w) == pytest.approx(expected, rel=1e-14)
        assert abs(K.value(c, w)) == 0.0

    def test_scale_is_constant_factor_of_g(self):
        # dividing by g = 2 divides the kernel by |2|^2
        K = pole_divide(base_kernel(DISK), (), scale=2.0)
        assert K.value(0.3, 0.1) == pytest.approx(disk_kernel(0.3, 0.1) / 4.0, rel=1e-14)

    def test_no_op_returns_input(self):
        K = base_kernel(DISK)
        assert pole_divide(K, ()) is K


class TestZeroAugment:
    def test_center_zero_matches_radial_closed_form(self):
        K = zero_augment(base_kernel(DISK), 0.0)
        for z, w in [(0.5, 0.5), (0.3 + 0.2j, -0.4 + 0.1j), (0.9, -0.85)]:
            assert K.value(z, w) == pytest.approx(disk_radial_kernel(2.0, z, w), rel=1e-12)

    def test_twofold_center_zero_matches_alpha_four(self):
        K = zero_augment(zero_augment(base_kernel(DISK), 0.0), 0.0)
        z, w = 0.4, 0.3 - 0.2j
        assert K.value(z, w) == pytest.approx(disk_radial_kernel(4.0, z, w), rel=1e-12)
        assert eval_with_limits(K, 0.0, 0.0) == pytest.approx(3.0 / math.pi, rel=1e-12)

    def test_value_at_removable_center(self):
        K = zero_augment(base_kernel(DISK), 0.0)
        # K_{|z|^2}(0, w) = 2/pi for every w
        assert eval_with_limits(K, 0.0, 0.0) == pytest.approx(2.0 / math.pi, rel=1e-12)
        assert eval_with_limits(K, 0.0, 0.37 - 0.2j) == pytest.approx(2.0 / math.pi, rel=1e-12)
        # continuity: the snapped value agrees with a nearby regular value
        near = K.value(1e-6, 0.37)
        assert abs(near - 2.0 / math.pi) < 1e-5

    def test_gram_frozen_value(self):
        K = zero_augment(base_kernel(DISK), 0.5)
        assert K.value(0.2, 0.1) == pytest.approx(GRAM_FROZEN_HALF, rel=1e-12)

    def test_matches_mobius_closed_form(self):
        K = zero_augment(base_kernel(DISK), 0.5)
        z, w = 0.6 - 0.3j, -0.2 + 0.7j
        assert K.value(z, w) == pytest.approx(disk_mobius_power_kernel(0.5, 1, z, w), rel=1e-12)

    def test_center_outside_rejected(self):
        with pytest.raises(DomainViolation):
            zero_augment(base_kernel(DISK), 2.0)
        with pytest.raises(DomainViolation):
            zero_augment(base_kernel(DomainSpec.annulus(0.5)), 0.25)


class TestDecompositionPlan:
    def test_total_multiplicity(self):
        plan = DecompositionPlan(((0.2, 2), (-0.3, 1)))
        assert plan.total_multiplicity == 3

    def test_validation(self):
        with pytest.raises(ValidationError):
            DecompositionPlan(((0.2, 0),))
        with pytest.raises(ValidationError):
            DecompositionPlan(((0.2, 1), (0.2, 1)))
        with pytest.raises(ValidationError):
            DecompositionPlan(((0.2, 1),), mode="other")


class TestMultiZeroAugment:
    def test_modes_agree(self):
        K0 = base_kernel(DISK)
        plan_it = DecompositionPlan(((0.4, 1), (-0.3, 1)), ITERATED)
        plan_ds = DecompositionPlan(((0.4, 1), (-0.3, 1)), DIRECT_SUM)
        Ki = multi_zero_augment(K0, plan_it)
        Kd = multi_zero_augment(K0, plan_ds)
        for z, w in [(0.25 + 0.1j, -0.2), (0.5, 0.3 + 0.3j)]:
            a, b = Ki.value(z, w), Kd.value(z, w)
            assert abs(a - b) <= 1e-11 * max(abs(a), 1.0)

    def test_order_permutation_invariance(self):
        K0 = base_kernel(DISK)
        Ka = multi_zero_augment(K0, DecompositionPlan(((0.4, 1), (-0.3, 1))))
        Kb = multi_zero_augment(K0, DecompositionPlan(((-0.3, 1), (0.4, 1))))
        z, w = 0.25 + 0.1j, -0.2
        assert Ka.value(z, w) == pytest.approx(Kb.value(z, w), rel=1e-11)

    def test_multiplicity_two_equals_repeated_single(self):
        K0 = base_kernel(DISK)
        Km = multi_zero_augment(K0, DecompositionPlan(((0.0, 2),)))
        z, w = 0.4, 0.3 - 0.2j
        assert Km.value(z, w) == pytest.approx(disk_radial_kernel(4.0, z, w), rel=1e-11)

    def test_frozen_oracle_value(self):
        K = multi_zero_augment(base_kernel(DISK), DecompositionPlan(((0.4, 1), (-0.3, 1))))
        got = K.value(0.25 + 0.1j, -0.2)
        assert abs(got - GRAM_FROZEN_PAIR) <= 1e-12 * abs(GRAM_FROZEN_PAIR)


class TestWeightedKernel:
    def test_trivial_weight_is_base_kernel(self):
        K = weighted_kernel(DISK, WeightSpec())
        assert K.value(0.5, 0.5) == pytest.approx(disk_kernel(0.5, 0.5), rel=1e-15)

    def test_constant_base_scales_inversely(self):
        K = weighted_kernel(DISK, WeightSpec(base=Constant(4.0)))
        assert K.value(0.3, 0.2) == pytest.approx(disk_kernel(0.3, 0.2) / 4.0, rel=1e-14)

    def test_radial_base(self):
        K = weighted_kernel(DISK, WeightSpec(base=RadialPower(2.0)))
        z, w = 0.4 + 0.1j, 0.2
        assert K.value(z, w) == pytest.approx(disk_radial_kernel(2.0, z, w), rel=1e-13)

    def test_routing_outside_zero_vs_interior_zero(self):
        # |z-2|^2 routes to division, |z-0.5|^2 to deflation
        K_out = weighted_kernel(DISK, WeightSpec(zeros=(Factor(2.0),)))
        z, w = 0.3, 0.1
        assert K_out.value(z, w) * (z - 2.0) * (w - 2.0) == pytest.approx(disk_kernel(z, w), rel=1e-14)
        K_in = weighted_kernel(DISK, WeightSpec(zeros=(Factor(0.5),)))
        assert K_in.value(0.2, 0.1) == pytest.approx(GRAM_FROZEN_HALF, rel=1e-12)

    def test_pole_factor_produces_vanishing_kernel(self):
        # weight |z-0.4|^(-2): the kernel vanishes identically at z = 0.4
        K = weighted_kernel(DISK, WeightSpec(poles=(Factor(0.4),)))
        z, w = 0.2 + 0.1j, -0.3
        expected = (z - 0.4) * disk_kernel(z, w) * (np.conjugate(w) - 0.4)
        assert K.value(z, w) == pytest.approx(expected, rel=1e-14)
        assert K.value(0.4, w) == 0.0

    def test_mode_argument_passes_through(self):
        w = WeightSpec(zeros=(Factor(0.4), Factor(-0.3)))
        Ki = weighted_kernel(DISK, w, ITERATED)
        Kd = weighted_kernel(DISK, w, DIRECT_SUM)
        z, u = 0.25 + 0.1j, -0.2
        assert Ki.value(z, u) == pytest.approx(Kd.value(z, u), rel=1e-11)

    def test_annulus_weighted(self):
        a = DomainSpec.annulus(0.5)
        K = weighted_kernel(a, WeightSpec(zeros=(Factor(0.75),)))
        # reproduces the diagonal positivity and Hermitian symmetry
        z, w = 0.6 + 0.2j, -0.7
        assert K.value(z, w) == pytest.approx(np.conjugate(K.value(w, z)), rel=1e-12)
        assert K.value(0.6, 0.6).real > 0


class TestFormulaRendering:
    def test_two_term_structure_plain(self):
        K = weighted_kernel(DISK, WeightSpec(zeros=(Factor(0.0),)))
        s = to_formula(K, "plain")
        assert "K1(z,w) - K1(z,0)*K1(0,w)/K1(0,0)" in s.replace(" ", "").replace("*", "*") or (
            "K1(z,w)" in s and "K1(0,0)" in s and "/" in s
        )
        assert "conj(w)" in s

    def test_latex_structure(self):
        K = weighted_kernel(DISK, WeightSpec(zeros=(Factor(0.0),)))
        s = to_formula(K, "latex")
        assert "\\frac" in s
        assert "\\overline{w}" in s

    def test_base_kernel_formula(self):
        s = to_formula(base_kernel(DISK), "plain")
        assert "pi" in s and "(1 - z*conj(w))^2" in s.replace("  ", " ")
