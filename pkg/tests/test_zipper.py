import json
import math

import numpy as np
import pytest

from circsym.errors import (
    DomainViolationError,
    GeometryError,
    InputError,
    ScopeError,
)
from circsym.geometry import (
    BoundaryCurve,
    boundary_from_series,
    radial_profile,
    symmetrize,
    symmetrized_boundary,
)
from circsym.series import PowerSeries
from circsym.zipper import (
    ElementaryStep,
    ZipperMap,
    build_map,
    eval_inverse,
    eval_map,
    series_of_map,
    with_target,
)

TWO_PI = 2.0 * math.pi


def circle_points(center, radius, M):
    theta = TWO_PI * np.arange(M) / M
    return tuple(center + radius * np.exp(1j * theta))


def mobius_oracle(z):
    # unique conformal map of U onto |w - 3| < 1 with F(0) = 3.5, F'(0) > 0
    return 3.0 + (z + 0.5) / (1.0 + z / 2.0)


def sup_error_on_disk(zm, oracle, radius=0.9):
    rr, tt = np.meshgrid(
        np.linspace(0.05, radius, 12), np.linspace(0, TWO_PI, 48, endpoint=False)
    )
    zz = (rr * np.exp(1j * tt)).ravel()
    return float(np.max(np.abs(eval_map(zm, zz) - oracle(zz))))


@pytest.fixture(scope="module")
def disk_map():
    return build_map(BoundaryCurve(circle_points(3.0, 1.0, 256)), 3.5)


@pytest.fixture(scope="module")
def quad_star_map():
    f = PowerSeries((4, 1, 0.4j))
    profile = symmetrize(radial_profile(boundary_from_series(f, 512), 128))
    return build_map(symmetrized_boundary(profile), 4.0)


class TestElementaryStep:
    anchors = (1 + 1j, -2 + 0.5j, 3j, 0.3 + 2j)

    def test_forward_inverse_identity(self):
        rng = np.random.default_rng(3)
        y = rng.uniform(-3, 3, 32) + 1j * rng.uniform(0.05, 3, 32)
        for a in self.anchors:
            step = ElementaryStep.from_anchor(a)
            z = step.inverse(y)
            assert np.max(np.abs(step.forward(z) - y)) < 1e-10

    def test_forward_lands_in_upper_half_plane(self):
        rng = np.random.default_rng(4)
        z = rng.uniform(-3, 3, 200) + 1j * rng.uniform(1e-3, 3, 200)
        for a in self.anchors:
            step = ElementaryStep.from_anchor(a)
            out = step.forward(z)
            assert np.min(out.imag) > -1e-9 * (1 + np.max(np.abs(out)))

    def test_anchor_maps_to_origin_neighborhood(self):
        # the slit tip is pulled onto the real axis at the origin
        step = ElementaryStep.from_anchor(1 + 1j)
        tip = step.forward(np.array([1 + 1j], dtype=complex))[0]
        assert abs(tip) < 1e-10

    def test_vertical_case(self):
        step = ElementaryStep.from_anchor(2j)
        assert step.foot is None
        assert step.h == pytest.approx(2.0)
        y = np.array([3.0 + 1.0j])
        assert np.abs(step.forward(step.inverse(y)) - y).max() < 1e-12

    def test_anchor_below_axis_rejected(self):
        with pytest.raises(GeometryError):
            ElementaryStep.from_anchor(1 - 1j)


class TestDiskOracle:
    def test_sup_error(self, disk_map):
        assert sup_error_on_disk(disk_map, mobius_oracle) < 1e-3

    def test_eval_at_zero(self, disk_map):
        assert eval_map(disk_map, 0.0) == pytest.approx(3.5, abs=1e-8)

    def test_eval_at_half(self, disk_map):
        # (0.5 + 0.5) / (1 + 0.25) = 0.8, so F(0.5) = 3.8
        assert eval_map(disk_map, 0.5) == pytest.approx(3.8, abs=1e-4)

    def test_centered_target_is_affine(self):
        zm = build_map(BoundaryCurve(circle_points(2.0, 1.0, 256)), 2.0)
        z = 0.5 * np.exp(1j * np.linspace(0, TWO_PI, 16, endpoint=False))
        assert np.max(np.abs(eval_map(zm, z) - (2.0 + z))) < 1e-4

    def test_inverse_of_target(self, disk_map):
        assert abs(eval_inverse(disk_map, 3.5)) < 1e-8

    def test_inverse_of_known_point(self, disk_map):
        assert eval_inverse(disk_map, 3.8) == pytest.approx(0.5, abs=1e-4)

    def test_resolution_convergence(self):
        errs = []
        for M in (256, 512):
            zm = build_map(BoundaryCurve(circle_points(3.0, 1.0, M)), 3.5)
            errs.append(sup_error_on_disk(zm, mobius_oracle))
        assert errs[0] / errs[1] > 1.5

    def test_renormalization_without_rebuild(self, disk_map):
        zm = with_target(disk_map, 2.5)
        z = 0.4 * np.exp(1j * np.linspace(0, TWO_PI, 12, endpoint=False))
        oracle = 3.0 + (z - 0.5) / (1.0 - z / 2.0)
        assert np.max(np.abs(eval_map(zm, z) - oracle)) < 1e-3
        assert eval_map(zm, 0.0) == pytest.approx(2.5, abs=1e-8)


class TestMapInvariants:
    @pytest.mark.parametrize("fixture", ["disk_map", "quad_star_map"])
    def test_eval_at_zero_is_target(self, fixture, request):
        zm = request.getfixturevalue(fixture)
        assert abs(eval_map(zm, 0.0) - zm.target) < 1e-8

    @pytest.mark.parametrize("fixture", ["disk_map", "quad_star_map"])
    def test_derivative_argument_positive(self, fixture, request):
        zm = request.getfixturevalue(fixture)
        h = 1e-6
        d = (eval_map(zm, h) - eval_map(zm, -h)) / (2 * h)
        assert abs(math.atan2(d.imag, d.real)) < 1e-6

    @pytest.mark.parametrize("fixture", ["disk_map", "quad_star_map"])
    def test_round_trip(self, fixture, request):
        zm = request.getfixturevalue(fixture)
        rng = np.random.default_rng(11)
        z = rng.uniform(0, 0.95, 64) * np.exp(1j * rng.uniform(0, TWO_PI, 64))
        w = eval_map(zm, z)
        assert np.max(np.abs(eval_inverse(zm, w) - z)) < 1e-8

    @pytest.mark.parametrize("fixture", ["disk_map", "quad_star_map"])
    def test_cauchy_riemann_residual(self, fixture, request):
        zm = request.getfixturevalue(fixture)
        h = 1e-5
        x, y = np.meshgrid(np.linspace(-0.5, 0.5, 10), np.linspace(-0.5, 0.5, 10))
        z = (x + 1j * y).ravel()
        fx = (eval_map(zm, z + h) - eval_map(zm, z - h)) / (2 * h)
        fy = (eval_map(zm, z + 1j * h) - eval_map(zm, z - 1j * h)) / (2 * h)
        residual = np.abs(fx + 1j * fy)
        assert residual.max() < 1e-3 * np.abs(fx).max()

    def test_boundary_fidelity(self, quad_star_map):
        f = PowerSeries((4, 1, 0.4j))
        profile = symmetrize(radial_profile(boundary_from_series(f, 512), 128))
        curve = symmetrized_boundary(profile)
        verts = np.asarray(curve.points)
        spacing = np.max(np.abs(np.diff(np.concatenate([verts, verts[:1]]))))
        z = 0.999 * np.exp(1j * TWO_PI * np.arange(128) / 128)
        images = eval_map(quad_star_map, z)
        dist = np.min(np.abs(images[:, None] - verts[None, :]), axis=1)
        assert dist.max() < 3 * spacing


class TestSeriesOfMap:
    def test_disk_oracle_coefficients(self, disk_map):
        s = series_of_map(disk_map, 0.8, 256, 8)
        oracle = [3.5] + [(-1) ** (n - 1) * 3 / 2 ** (n + 1) for n in range(1, 9)]
        assert np.max(np.abs(np.array(s.coefficients) - oracle)) < 1e-4

    def test_affine_coefficients(self):
        zm = build_map(BoundaryCurve(circle_points(2.0, 1.0, 256)), 2.0)
        s = series_of_map(zm, 0.8, 128, 6)
        coeffs = np.array(s.coefficients)
        assert coeffs[0] == pytest.approx(2.0, abs=1e-6)
        assert coeffs[1] == pytest.approx(1.0, abs=1e-4)
        assert np.max(np.abs(coeffs[2:])) < 1e-4

    def test_constant_term_is_target(self, quad_star_map):
        s = series_of_map(quad_star_map, 0.8, 256, 16)
        assert s.coefficients[0] == pytest.approx(4.0, abs=1e-6)

    def test_reality_of_coefficients(self, quad_star_map):
        s = series_of_map(quad_star_map, 0.8, 256, 32)
        coeffs = np.array(s.coefficients)
        assert np.max(np.abs(coeffs.imag)) < 1e-4 * np.max(np.abs(coeffs))

    def test_first_coefficient_positive(self, quad_star_map):
        s = series_of_map(quad_star_map, 0.8, 256, 16)
        assert s.coefficients[1].real > 0

    def test_bad_radius(self, disk_map):
        with pytest.raises(DomainViolationError):
            series_of_map(disk_map, 1.0, 256, 8)


class TestSerialization:
    def test_json_round_trip(self, quad_star_map):
        data = json.loads(json.dumps(quad_star_map.to_json_dict()))
        again = ZipperMap.from_json_dict(data)
        z = 0.7 * np.exp(1j * np.linspace(0, TWO_PI, 10, endpoint=False))
        assert np.max(np.abs(eval_map(again, z) - eval_map(quad_star_map, z))) < 1e-14

    def test_malformed(self):
        with pytest.raises(InputError):
            ZipperMap.from_json_dict({"initial": [[0, 0]]})


class TestErrors:
    def test_misoriented_boundary(self):
        theta = TWO_PI * np.arange(64) / 64
        pts = tuple(3.0 + np.exp(-1j * theta))
        with pytest.raises(GeometryError):
            build_map(BoundaryCurve(pts), 3.0)

    def test_asymmetric_boundary(self):
        curve = boundary_from_series(PowerSeries((4, 1, 0.4j)), 256)
        with pytest.raises(ScopeError):
            build_map(curve, 4.0)

    def test_target_outside(self):
        curve = BoundaryCurve(circle_points(3.0, 1.0, 128))
        with pytest.raises(ScopeError):
            build_map(curve, 0.5)

    def test_target_not_positive(self):
        curve = BoundaryCurve(circle_points(3.0, 1.0, 128))
        with pytest.raises(InputError):
            build_map(curve, -2.0)

    def test_eval_outside_disk(self, disk_map):
        with pytest.raises(DomainViolationError):
            eval_map(disk_map, 1.5)

    def test_inverse_outside_domain(self, disk_map):
        with pytest.raises(DomainViolationError):
            eval_inverse(disk_map, 10.0 + 0j)
