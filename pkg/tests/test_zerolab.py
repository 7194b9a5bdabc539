"""Zero scanning, certification, transfer identities, and boundary tracking.

The annulus witness anchor below was frozen from an independent bilateral
summation (n_max = 60000) plus Brent root bracketing on the real section:
the r = 0.5 kernel vanishes on z conj(w) = t0 with t0 = -0.70710698552,
so the w0 = 0.8 slice has its real zero at t0 / 0.8.
"""

import math

import numpy as np
import pytest

from bergkern import (
    IN_W,
    IN_Z,
    DomainSpec,
    DomainViolation,
    GridSpec,
    HypothesisUnmet,
    NoConvergence,
    TrackingFailed,
    ValidationError,
    base_kernel,
    boundary_ratio,
    lu_qikeng_status,
    order_drop_ratio,
    refine_zero,
    scan_slice_zeros,
    track_zero_near_boundary,
    weighted_kernel,
    zero_order,
    zero_transfer_report,
)
from bergkern.model import WeightSpec, Factor

ANNULUS = DomainSpec.annulus(0.5)
DISK = DomainSpec.disk()
WITNESS_Z = -0.8838837319020577  # frozen anchor, see module docstring
W0 = 0.8


@pytest.fixture(scope="module")
def annulus_kernel_node():
    return base_kernel(ANNULUS)


@pytest.fixture(scope="module")
def annulus_witness(annulus_kernel_node):
    wits = scan_slice_zeros(annulus_kernel_node, W0, GridSpec.covering(ANNULUS, resolution=32))
    assert wits, "the r=0.5 annulus slice at w0=0.8 must contain a zero"
    return wits[0]


class TestGridSpec:
    def test_covering_matches_domain_bounds(self):
        g = GridSpec.covering(DISK)
        assert (g.xmin, g.xmax, g.ymin, g.ymax) == (-1.0, 1.0, -1.0, 1.0)
        assert g.resolution == 64

    def test_validation(self):
        with pytest.raises(ValidationError):
            GridSpec(xmin=1.0, xmax=-1.0, ymin=-1.0, ymax=1.0)
        with pytest.raises(ValidationError):
            GridSpec(xmin=-1.0, xmax=1.0, ymin=-1.0, ymax=1.0, resolution=0)
        with pytest.raises(ValidationError):
            GridSpec(samples_per_edge=16)

    def test_cell_count(self):
        g = GridSpec.covering(DISK, resolution=8)
        assert len(list(g.cells())) == 64


class TestScan:
    def test_disk_slice_is_zero_free(self):
        K = base_kernel(DISK)
        wits = scan_slice_zeros(K, 0.3, GridSpec.covering(DISK, resolution=32))
        assert wits == []

    def test_annulus_slice_zero_location(self, annulus_witness):
        assert annulus_witness.z == pytest.approx(WITNESS_Z, abs=1e-9)
        assert abs(annulus_witness.z.imag) < 1e-9
        assert annulus_witness.w == W0
        assert annulus_witness.winding == 1

    def test_witness_residual_is_certified(self, annulus_kernel_node, annulus_witness):
        K = annulus_kernel_node
        scale = math.sqrt(
            K.value(annulus_witness.z, annulus_witness.z).real * K.value(W0, W0).real
        )
        assert annulus_witness.residual <= 1e-10 * scale

    def test_second_zero_on_conjugate_ring(self, annulus_kernel_node):
        # the kernel also vanishes on z conj(w) = r^2 / t0, well inside
        t1 = 0.25 / (WITNESS_Z * W0)
        z1 = t1 / W0
        v = annulus_kernel_node.value(z1, W0)
        assert abs(v) < 1e-10


class TestRefine:
    def test_converges_from_perturbed_guess(self, annulus_kernel_node, annulus_witness):
        wit = refine_zero(annulus_kernel_node, W0, annulus_witness.z + 0.004 - 0.003j)
        assert wit.z == pytest.approx(annulus_witness.z, abs=1e-8)
        assert wit.winding == 1

    def test_zero_free_region_raises(self):
        with pytest.raises(NoConvergence):
            refine_zero(base_kernel(DISK), 0.3, 0.2)


class TestZeroOrder:
    def test_simple_in_both_directions(self, annulus_kernel_node, annulus_witness):
        assert zero_order(annulus_kernel_node, annulus_witness.z, W0, IN_Z) == 1
        assert zero_order(annulus_kernel_node, annulus_witness.z, W0, IN_W) == 1

    def test_undefined_where_slice_does_not_vanish(self, annulus_kernel_node):
        with pytest.raises(ValidationError):
            zero_order(annulus_kernel_node, 0.75, W0, IN_Z)


class TestTransfer:
    def test_vanishing_configuration_ratio_identity(self, annulus_kernel_node, annulus_witness):
        # c placed on the slice zero forces K(c, w0) = 0, so the explicit
        # ratio form of the augmented kernel applies
        rep = zero_transfer_report(annulus_kernel_node, annulus_witness.z, 0.6 + 0.1j, W0)
        assert rep.factor_vanishes
        assert rep.ratio_applicable
        assert rep.ratio_ok
        assert rep.ratio_rel_err <= 1e-8
        assert rep.biconditional_ok

    def test_plain_configuration_biconditional(self, annulus_kernel_node):
        rep = zero_transfer_report(annulus_kernel_node, 0.55 + 0.2j, 0.6 + 0.1j, 0.75)
        assert not rep.factor_vanishes
        assert not rep.ratio_applicable
        assert rep.biconditional_ok

    def test_disk_configurations_never_violate(self):
        K = base_kernel(DISK)
        for c, z0, w0 in [(0.2, 0.5, -0.3), (0.1 + 0.4j, -0.2 + 0.1j, 0.6)]:
            rep = zero_transfer_report(K, c, z0, w0)
            assert rep.biconditional_ok
            assert not rep.aug_vanishes

    def test_coincident_points_rejected(self, annulus_kernel_node):
        with pytest.raises(HypothesisUnmet):
            zero_transfer_report(annulus_kernel_node, 0.75, 0.75, 0.8)
        with pytest.raises(DomainViolation):
            zero_transfer_report(annulus_kernel_node, 0.25, 0.6, 0.8)


class TestOrderDrop:
    def test_augmentation_at_simple_zero_is_nonzero(self, annulus_kernel_node, annulus_witness):
        # the augmented slice is order 0 at c: its value there is of the
        # same size as the slice on the probe circle, so the ratio sits
        # near 1 rather than under the 1e-6 vanishing threshold
        ratio = order_drop_ratio(annulus_kernel_node, annulus_witness.z, W0)
        assert ratio > 0.1
        assert ratio < 10.0

    def test_residual_zero_scores_below_threshold(self, annulus_kernel_node, annulus_witness):
        # control: the un-augmented kernel itself vanishes at the witness,
        # so the same local-scale measurement lands under 1e-6 there
        K = annulus_kernel_node
        z0 = annulus_witness.z
        circle = W0 + 1e-3 * np.exp(2j * np.pi * np.arange(256) / 256)
        scale = float(np.median(np.abs(K.values_z(circle.astype(complex), z0))))
        assert abs(K.value(z0, W0)) / scale < 1e-6

    def test_matches_removable_limit(self, annulus_kernel_node, annulus_witness):
        # K_aug(z0, c) = d/d(conj w) K(z0, c) / (z0 - c) when K(z0, c) = 0
        K = annulus_kernel_node
        z0, c = annulus_witness.z, W0
        from bergkern import zero_augment

        expected = K.dwbar(z0, c) / (z0 - c)
        got = zero_augment(K, c).value(z0, c)
        assert got == pytest.approx(expected, rel=1e-9)


class TestBoundaryRatio:
    def test_disk_closed_form(self):
        K = base_kernel(DISK)
        cs = [1 - 2.0 ** (-j) for j in range(3, 9)]
        tr = boundary_ratio(K, 0.0, cs)
        for c, v in zip(cs, tr.values):
            assert v == pytest.approx((1 - c * c) / math.sqrt(math.pi), rel=1e-12)

    def test_trace_decays_toward_boundary(self, annulus_kernel_node):
        cs = [1 - 2.0 ** (-j) for j in range(3, 9)]
        tr = boundary_ratio(annulus_kernel_node, 0.75, cs)
        assert tr.values[-1] < tr.values[0]

    def test_rejects_center_outside(self):
        with pytest.raises(DomainViolation):
            boundary_ratio(base_kernel(DISK), 0.0, [1.5])


class TestTracking:
    def test_follows_witness_toward_boundary(self, annulus_kernel_node, annulus_witness):
        u = annulus_witness.z / abs(annulus_witness.z)
        centers = [(1 - 2.0 ** (-j)) * u for j in range(3, 11)]
        steps = track_zero_near_boundary(annulus_kernel_node, annulus_witness, centers)
        assert len(steps) == len(centers)
        accepted = [s for s in steps if s.accepted]
        assert len(accepted) >= 3
        assert accepted[-1].distance <= 0.05
        final = [s.distance for s in accepted[-3:]]
        assert final[0] > final[1] > final[2]

    def test_center_inside_ball_is_skipped_with_reason(self, annulus_kernel_node, annulus_witness):
        # early centers land inside the tracking ball, where the deflation
        # numerator's forced zero at z = c consumes the tracked zero
        u = annulus_witness.z / abs(annulus_witness.z)
        centers = [(1 - 2.0 ** (-j)) * u for j in range(3, 7)]
        steps = track_zero_near_boundary(annulus_kernel_node, annulus_witness, centers)
        skipped = [s for s in steps if not s.accepted]
        assert skipped
        assert all("ball" in s.reason for s in skipped)
        assert all(s.z1 is None for s in skipped)

    def test_no_passing_center_raises(self, annulus_kernel_node, annulus_witness):
        with pytest.raises(TrackingFailed):
            track_zero_near_boundary(annulus_kernel_node, annulus_witness, [0.55])


class TestLuQikengStatus:
    def test_annulus_finds_zero(self, annulus_kernel_node):
        rep = lu_qikeng_status(
            annulus_kernel_node,
            GridSpec.covering(ANNULUS, resolution=32),
            GridSpec.covering(ANNULUS, resolution=8),
        )
        assert rep.status == "zero_found"
        assert rep.zero_found
        assert rep.witness is not None and rep.witness.winding == 1
        assert rep.w_used is not None

    def test_disk_reports_no_zero(self):
        rep = lu_qikeng_status(
            base_kernel(DISK),
            GridSpec.covering(DISK, resolution=16),
            GridSpec.covering(DISK, resolution=4),
        )
        assert rep.status == "no_zero_at_resolution"
        assert not rep.zero_found
        assert rep.witness is None
        assert rep.slices_scanned > 0

    def test_weighted_disk_interior_zero_found(self):
        # weight |z-0.4|^(-2) forces K(0.4, w) = 0 for every w
        K = weighted_kernel(DISK, WeightSpec(poles=(Factor(0.4),)))
        rep = lu_qikeng_status(
            K, GridSpec.covering(DISK, resolution=32), GridSpec.covering(DISK, resolution=4)
        )
        assert rep.zero_found
        assert rep.witness.z == pytest.approx(0.4, abs=1e-8)
