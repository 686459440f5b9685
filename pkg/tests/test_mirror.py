import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dipolewave.errors import DomainError
from dipolewave.mirror import (
    AngularDomain,
    ParabolicMirror,
    angle_to_radius,
    coverage_domain,
    optical_path,
    radius_to_angle,
)

UNIT = ParabolicMirror(1.0, 1.0)


@pytest.mark.parametrize(
    "theta, rho",
    [
        (0.0, 0.0),
        (np.pi / 2, 2.0),
        (2 * np.arctan(np.sqrt(6.0)), 2 * np.sqrt(6.0)),
    ],
)
def test_angle_to_radius_examples(theta, rho):
    assert angle_to_radius(UNIT, theta) == pytest.approx(rho, abs=1e-14)


@pytest.mark.parametrize("theta", [np.pi, 4.0, -0.1])
def test_angle_to_radius_rejects_out_of_range(theta):
    with pytest.raises(DomainError):
        angle_to_radius(UNIT, theta)


def test_round_trip_over_domain():
    theta = np.linspace(0.0, np.pi - 1e-6, 10_001)
    back = radius_to_angle(UNIT, angle_to_radius(UNIT, theta))
    rho = angle_to_radius(UNIT, theta)
    assert np.allclose(back, theta, rtol=1e-12, atol=1e-15)
    assert np.allclose(angle_to_radius(UNIT, radius_to_angle(UNIT, rho)), rho, rtol=1e-12, atol=0)
    assert np.all(np.diff(rho) > 0)


@given(st.floats(0.01, 100.0), st.floats(0.0, np.pi - 1e-6))
def test_round_trip_property(f, theta):
    m = ParabolicMirror(f, 1.0)
    assert radius_to_angle(m, angle_to_radius(m, theta)) == pytest.approx(theta, rel=1e-12, abs=1e-15)


@pytest.mark.parametrize(
    "depth, rim",
    [(1.0, np.pi / 2), (0.0, 0.0), (6.0, 2 * np.arctan(np.sqrt(6.0)))],
)
def test_coverage_domain_examples(depth, rim):
    dom = coverage_domain(ParabolicMirror(1.0, depth))
    assert dom.theta_min == 0.0
    assert dom.theta_max == pytest.approx(rim, abs=1e-14)


def test_depth_six_rim_angle_in_degrees():
    assert np.degrees(ParabolicMirror(1.0, 6.0).rim_angle) == pytest.approx(135.5847, abs=1e-4)


def test_rim_geometry_matches_parabola():
    m = ParabolicMirror(0.7, 3.1)
    assert m.surface_height(m.rim_radius) == pytest.approx(m.depth, rel=1e-14)
    assert np.tan(m.rim_angle / 2) == pytest.approx(m.rim_radius / (2 * m.focal_length), rel=1e-14)
    # rim point seen from the focus at (0, f)
    assert np.arctan2(m.rim_radius, m.focal_length - m.depth) == pytest.approx(m.rim_angle, rel=1e-14)


def test_rim_angle_increases_towards_pi():
    depths = np.geomspace(1e-4, 1e6, 200)
    rims = [ParabolicMirror(1.0, d).rim_angle for d in depths]
    assert np.all(np.diff(rims) > 0)
    assert rims[-1] > np.pi - 1e-2


def test_constant_optical_path():
    m = ParabolicMirror(1.3, 6 * 1.3)
    theta = np.linspace(0.0, np.pi - 1e-6, 1001)
    path = optical_path(m, theta)
    assert np.allclose(path, m.focal_length + m.depth, rtol=1e-12, atol=0)


@pytest.mark.parametrize("f, d", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.5), (np.nan, 1.0)])
def test_invalid_mirror(f, d):
    with pytest.raises(ValueError):
        ParabolicMirror(f, d)


@pytest.mark.parametrize("lo, hi", [(-0.1, 1.0), (1.0, 0.5), (0.0, 3.5)])
def test_invalid_domain(lo, hi):
    with pytest.raises(DomainError):
        AngularDomain(lo, hi)


def test_domain_complement():
    comp = AngularDomain(0.0, 2.0).complement()
    assert (comp.theta_min, comp.theta_max) == (2.0, np.pi)
