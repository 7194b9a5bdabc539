"""Hartogs lifts: profile semantics, slice weights, and zero certificates."""

import math

import numpy as np
import pytest

from bergkern import (
    CERTIFIED,
    INCONCLUSIVE,
    Constant,
    DomainSpec,
    Factor,
    GridSpec,
    HartogsSpec,
    RadialPower,
    ValidationError,
    WeightSpec,
    certify_non_lu_qikeng,
    disk_kernel,
    disk_radial_kernel,
    lift,
    profile_value,
    slice_kernel,
)

DISK = DomainSpec.disk()
ANNULUS = DomainSpec.annulus(0.5)


class TestProfileValue:
    def test_single_power_semantics(self):
        # rho(z) = 2 |z - 0.3| / |z - 2|
        h = lift(DISK, WeightSpec(Constant(2.0), zeros=(Factor(0.3),), poles=(Factor(2.0),)))
        z = 0.5 + 0.1j
        expected = 2.0 * abs(z - 0.3) / abs(z - 2.0)
        assert profile_value(h, z) == pytest.approx(expected, rel=1e-15)

    def test_pole_center_gives_infinite_fiber(self):
        h = lift(DISK, WeightSpec(Constant(1.0), poles=(Factor(0.4),)))
        assert profile_value(h, 0.4) == math.inf

    def test_negative_radial_power_at_origin(self):
        h = lift(ANNULUS, WeightSpec(RadialPower(-0.5)))
        assert profile_value(h, 0.0) == math.inf
        assert profile_value(h, 0.5) == pytest.approx(0.5 ** -0.5, rel=1e-15)


class TestLift:
    def test_constant_base_absorbs_pi(self):
        h = lift(DISK, WeightSpec(Constant(2.0)))
        assert isinstance(h.slice_weight.base, Constant)
        assert h.slice_weight.base.value == pytest.approx(4.0 * math.pi, rel=1e-15)
        assert h.slice_constant == 1.0
        assert h.bounded

    def test_radial_base_doubles_alpha_and_keeps_pi(self):
        h = lift(DISK, WeightSpec(RadialPower(1.0)))
        assert isinstance(h.slice_weight.base, RadialPower)
        assert h.slice_weight.base.alpha == 2.0
        assert h.slice_constant == math.pi

    def test_factor_tuples_carry_over(self):
        prof = WeightSpec(Constant(1.0), zeros=(Factor(0.3, 2),), poles=(Factor(2.0, 1),))
        h = lift(DISK, prof)
        assert h.slice_weight.zeros == prof.zeros
        assert h.slice_weight.poles == prof.poles
        assert h.profile_weight == prof

    def test_boundedness_flags(self):
        assert lift(DISK, WeightSpec(Constant(1.0), poles=(Factor(2.0),))).bounded
        assert not lift(DISK, WeightSpec(Constant(1.0), poles=(Factor(0.4),))).bounded
        assert not lift(DISK, WeightSpec(Constant(1.0), poles=(Factor(1.0),))).bounded
        assert not lift(DISK, WeightSpec(RadialPower(-0.5))).bounded
        assert lift(ANNULUS, WeightSpec(RadialPower(-0.5))).bounded

    def test_spec_validation_and_round_trip_dict(self):
        h = lift(DISK, WeightSpec(RadialPower(1.0)))
        d = h.to_dict()
        assert d["slice_constant"] == math.pi
        assert d["bounded"] is True
        assert d["base"]["kind"] == "disk"
        with pytest.raises(ValidationError):
            HartogsSpec(DISK, WeightSpec(), WeightSpec(), slice_constant=0.0, bounded=True)


class TestSliceKernel:
    def test_interior_pole_profile_factors_the_kernel(self):
        # rho = (1/sqrt(pi)) / |z - 0.4| lifts to slice weight |z - 0.4|^(-2),
        # whose kernel is (z - 0.4) K(z, w) (conj(w) - 0.4)
        h = lift(DISK, WeightSpec(Constant(1.0 / math.sqrt(math.pi)), poles=(Factor(0.4),)))
        K = slice_kernel(h)
        for z, w in [(0.2 + 0.1j, -0.3), (0.5, 0.6 - 0.2j)]:
            expected = (z - 0.4) * disk_kernel(z, w) * (np.conjugate(w) - 0.4)
            assert K.value(z, w) == pytest.approx(expected, rel=1e-13)
        assert K.value(0.4, 0.1) == 0.0

    def test_radial_profile_divides_leftover_constant(self):
        h = lift(DISK, WeightSpec(RadialPower(1.0)))
        K = slice_kernel(h)
        z, w = 0.3 + 0.2j, -0.1 + 0.4j
        assert K.value(z, w) == pytest.approx(disk_radial_kernel(2.0, z, w) / math.pi, rel=1e-13)

    def test_flat_profile_recovers_scaled_base_kernel(self):
        # rho = 1: slice weight is the constant pi, kernel is K / pi
        h = lift(DISK, WeightSpec(Constant(1.0)))
        K = slice_kernel(h)
        assert K.value(0.5, 0.5) == pytest.approx(disk_kernel(0.5, 0.5) / math.pi, rel=1e-14)


class TestCertification:
    def test_interior_pole_profile_is_certified(self):
        h = lift(DISK, WeightSpec(Constant(1.0 / math.sqrt(math.pi)), poles=(Factor(0.4),)))
        cert = certify_non_lu_qikeng(
            h,
            z_grid=GridSpec.covering(DISK, resolution=32),
            w_grid=GridSpec.covering(DISK, resolution=8),
        )
        assert cert.status == CERTIFIED
        assert cert.certified
        assert cert.witness is not None
        assert cert.witness.z == pytest.approx(0.4, abs=1e-8)
        assert cert.method == "forelli-rudin-slice"

    def test_flat_profile_is_inconclusive(self):
        h = lift(DISK, WeightSpec(Constant(1.0)))
        cert = certify_non_lu_qikeng(
            h,
            z_grid=GridSpec.covering(DISK, resolution=16),
            w_grid=GridSpec.covering(DISK, resolution=4),
        )
        assert cert.status == INCONCLUSIVE
        assert not cert.certified
        assert cert.witness is None

    def test_annulus_base_is_certified(self):
        h = lift(ANNULUS, WeightSpec(Constant(1.0)))
        cert = certify_non_lu_qikeng(
            h,
            z_grid=GridSpec.covering(ANNULUS, resolution=32),
            w_grid=GridSpec.covering(ANNULUS, resolution=8),
        )
        assert cert.certified
        assert cert.witness.winding == 1

    def test_certificate_dict_shape(self):
        h = lift(DISK, WeightSpec(Constant(1.0 / math.sqrt(math.pi)), poles=(Factor(0.4),)))
        cert = certify_non_lu_qikeng(
            h,
            z_grid=GridSpec.covering(DISK, resolution=32),
            w_grid=GridSpec.covering(DISK, resolution=8),
        )
        d = cert.to_dict()
        assert set(d) == {
            "domain",
            "status",
            "witness",
            "method",
            "z_resolution",
            "w_resolution",
            "slices_scanned",
        }
        assert d["witness"]["re_z"] == pytest.approx(0.4, abs=1e-8)
        assert d["domain"]["bounded"] is False
