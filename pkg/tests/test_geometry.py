"""Cross-section and cone geometry."""

import math

import numpy as np
import pytest

from conekit import (
    ConeGeometry,
    ConePoint,
    DomainError,
    SeparationCrossSection,
    SphereCrossSection,
    TorusCrossSection,
    cone_distance,
)
from conekit.geometry import _phi, diag_defining, log_radial_grid

from oracles import euclid_distance


class TestConePoint:
    def test_accepts_positive_radius(self):
        z = ConePoint(2.5, (1.0, 0.0, 0.0))
        assert z.r == 2.5

    @pytest.mark.parametrize("r", [0.0, -1.0, math.inf, math.nan])
    def test_rejects_bad_radius(self, r):
        with pytest.raises(DomainError):
            ConePoint(r, 0.0)


class TestSphere:
    def test_distance_roundtrip(self):
        cs = SphereCrossSection(2, radius=1.0)
        for s in [0.0, 1e-8, 0.3, 1.5, math.pi - 1e-6, math.pi]:
            y, yp = cs.points_at_separation(s)
            np.testing.assert_allclose(cs.distance(y, yp), s, rtol=1e-12, atol=1e-15)

    def test_distance_scales_with_radius(self):
        cs = SphereCrossSection(3, radius=2.5)
        y, yp = cs.points_at_separation(2.0)
        np.testing.assert_allclose(cs.distance(y, yp), 2.0, rtol=1e-12)

    def test_distance_symmetric(self):
        cs = SphereCrossSection(2)
        rng = np.random.default_rng(7)
        for _ in range(20):
            y = rng.normal(size=3)
            yp = rng.normal(size=3)
            y /= np.linalg.norm(y)
            yp /= np.linalg.norm(yp)
            assert cs.distance(y, yp) == pytest.approx(cs.distance(yp, y), rel=1e-14)

    def test_distance_stable_at_tiny_angles(self):
        cs = SphereCrossSection(2)
        # arccos of the dot product would lose ~half the digits here.
        y = np.array([1.0, 0.0, 0.0])
        eps = 1e-9
        yp = np.array([math.cos(eps), math.sin(eps), 0.0])
        np.testing.assert_allclose(cs.distance(y, yp), eps, rtol=1e-9)

    def test_volume(self):
        assert SphereCrossSection(2).volume == pytest.approx(4 * math.pi, rel=1e-14)
        assert SphereCrossSection(1, radius=3.0).volume == pytest.approx(
            6 * math.pi, rel=1e-14
        )

    def test_rejects_offsphere_point(self):
        cs = SphereCrossSection(2)
        with pytest.raises(DomainError):
            cs.distance(np.array([1.0, 0.0, 0.0]), np.array([2.0, 0.0, 0.0]))

    def test_rejects_bad_separation(self):
        cs = SphereCrossSection(2)
        with pytest.raises(DomainError):
            cs.points_at_separation(3.5)  # > pi * radius
        with pytest.raises(DomainError):
            cs.points_at_separation(-0.1)

    @pytest.mark.parametrize("bad", [0, -2, 1.5])
    def test_rejects_bad_dim(self, bad):
        with pytest.raises(DomainError):
            SphereCrossSection(bad)


class TestTorus:
    def test_wraparound_distance(self):
        cs = TorusCrossSection([1.0])
        assert cs.distance([0.1], [2 * math.pi - 0.1]) == pytest.approx(0.2, rel=1e-12)

    def test_anisotropic_metric(self):
        cs = TorusCrossSection([1.0, 2.0])
        # ds^2 = (a1 dtheta1)^2 + (a2 dtheta2)^2
        got = cs.distance([0.0, 0.0], [0.3, 0.4])
        np.testing.assert_allclose(got, math.hypot(0.3, 0.8), rtol=1e-12)

    def test_points_at_separation_roundtrip(self):
        cs = TorusCrossSection([1.5, 1.0])
        for s in [0.0, 0.7, 1.5 * math.pi]:
            y, yp = cs.points_at_separation(s)
            np.testing.assert_allclose(cs.distance(y, yp), s, rtol=1e-12, atol=0)

    def test_volume(self):
        cs = TorusCrossSection([1.0, 2.0])
        assert cs.volume == pytest.approx((2 * math.pi) * (4 * math.pi), rel=1e-14)

    def test_rejects_bad_radii(self):
        with pytest.raises(DomainError):
            TorusCrossSection([])
        with pytest.raises(DomainError):
            TorusCrossSection([1.0, -1.0])


class TestSeparationCrossSection:
    def test_distance_is_absolute_difference(self):
        cs = SeparationCrossSection()
        assert cs.distance(0.2, 1.5) == pytest.approx(1.3)
        y, yp = cs.points_at_separation(0.9)
        assert cs.distance(y, yp) == pytest.approx(0.9)

    def test_unknown_dimension(self):
        cs = SeparationCrossSection()
        assert cs.dim is None and cs.volume is None


class TestConeGeometry:
    def test_dimension_consistency(self):
        ConeGeometry(3, SphereCrossSection(2))  # fine
        with pytest.raises(DomainError):
            ConeGeometry(4, SphereCrossSection(2))
        with pytest.raises(DomainError):
            ConeGeometry(2, SphereCrossSection(1))

    def test_separation_cross_section_fits_any_d(self):
        ConeGeometry(3, SeparationCrossSection())
        ConeGeometry(7, SeparationCrossSection())

    def test_distance_matches_r3_embedding(self):
        geom = ConeGeometry(3, SphereCrossSection(2))
        cs = geom.cross_section
        rng = np.random.default_rng(11)
        for _ in range(50):
            r, rp = rng.uniform(0.1, 5.0, size=2)
            gamma = rng.uniform(0.0, math.pi)
            y, yp = cs.points_at_separation(gamma)
            got = geom.distance(ConePoint(r, y), ConePoint(rp, yp))
            np.testing.assert_allclose(got, euclid_distance(r, rp, gamma), rtol=1e-12)


class TestConeDistance:
    def test_law_of_cosines_region(self):
        np.testing.assert_allclose(
            cone_distance(1.0, 2.0, 1.0), euclid_distance(1.0, 2.0, 1.0), rtol=1e-14
        )

    def test_tip_branch(self):
        assert cone_distance(1.0, 2.0, math.pi) == 3.0
        assert cone_distance(0.5, 0.7, 4.0) == pytest.approx(1.2)

    def test_branches_agree_at_pi(self):
        lhs = cone_distance(1.3, 0.4, math.pi - 1e-12)
        assert lhs == pytest.approx(1.7, rel=1e-10)

    def test_stable_near_diagonal(self):
        # (r - rp)^2 + 4 r rp sin^2(dy/2) keeps full precision where the
        # naive r^2 + rp^2 - 2 r rp cos(dy) cancels catastrophically.
        d = cone_distance(1.0, 1.0, 1e-9)
        np.testing.assert_allclose(d, 1e-9, rtol=1e-12)
        rp = 1.0 + 1e-10
        d2 = cone_distance(1.0, rp, 0.0)
        np.testing.assert_allclose(d2, rp - 1.0, rtol=1e-12)

    def test_rejects_bad_input(self):
        with pytest.raises(DomainError):
            cone_distance(0.0, 1.0, 0.5)
        with pytest.raises(DomainError):
            cone_distance(1.0, 1.0, -0.1)


class TestDiagDefining:
    def test_phi_branches_and_monotonicity(self):
        assert _phi(0.3) == 0.3
        assert _phi(2.0) == 1.0
        xs = np.linspace(0.01, 1.2, 200)
        vals = [_phi(float(x)) for x in xs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        # C^1 junctions: finite-difference slopes approach 1 and 0.
        h = 1e-6
        assert (_phi(0.5 + h) - _phi(0.5 - h)) / (2 * h) == pytest.approx(1.0, abs=1e-5)
        assert (_phi(1.0 + h) - _phi(1.0 - h)) / (2 * h) == pytest.approx(0.0, abs=1e-5)

    def test_diag_defining_scales(self):
        geom = ConeGeometry(3, SphereCrossSection(2))
        y, yp = geom.cross_section.points_at_separation(0.01)
        near = diag_defining(ConePoint(1.0, y), ConePoint(1.0, yp), geom)
        far = diag_defining(ConePoint(5.0, y), ConePoint(1.0, yp), geom)
        assert near < 1e-3 < far


class TestLogRadialGrid:
    def test_endpoints_and_ratios(self):
        g = log_radial_grid(1e-3, 1e3, 7)
        np.testing.assert_allclose(g[0], 1e-3, rtol=1e-14)
        np.testing.assert_allclose(g[-1], 1e3, rtol=1e-14)
        np.testing.assert_allclose(np.diff(np.log(g)), math.log(10), rtol=1e-12)

    def test_rejects_bad_ranges(self):
        with pytest.raises(DomainError):
            log_radial_grid(1.0, 0.5, 5)
        with pytest.raises(DomainError):
            log_radial_grid(1.0, 2.0, 1)
