import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphere12.geometry import (
    DegenerateDisplacement,
    DomainError,
    angle_from_radius,
    angular_distance,
    displace,
    exp_map,
    is_rotation,
    radius_from_angle,
    random_rotation,
    random_tangent,
    rotate,
    rotation_about,
    unit,
)


def test_angular_distance_basic_cases():
    assert angular_distance([0, 0, 1], [0, 0, -1]) == pytest.approx(math.pi)
    assert angular_distance([1, 0, 0], [1, 0, 0]) == 0.0
    assert angular_distance([1, 0, 0], [0, 1, 0]) == pytest.approx(math.pi / 2)


def test_angular_distance_clamps_rounding():
    u = unit([1.0, 1e-9, 0.0])
    assert not math.isnan(angular_distance(u, u * (1 + 1e-15)))


def test_radius_from_angle_reference_values():
    assert radius_from_angle(math.pi / 3) == pytest.approx(1.0, abs=1e-15)
    assert radius_from_angle(math.radians(63.4349)) == pytest.approx(1.1085, abs=1e-4)
    assert radius_from_angle(math.pi / 2) == pytest.approx(1 + math.sqrt(2), abs=1e-12)


def test_angle_from_radius_reference_values():
    assert angle_from_radius(1.0) == pytest.approx(math.pi / 3, abs=1e-15)
    assert angle_from_radius(2 + math.sqrt(6)) == pytest.approx(math.acos(-1 / 3), abs=1e-12)
    assert math.degrees(angle_from_radius(2 + math.sqrt(6))) == pytest.approx(109.4712, abs=1e-4)


@pytest.mark.parametrize("theta", [0.1, 1.0, 3.0])
def test_round_trip_fixed(theta):
    assert angle_from_radius(radius_from_angle(theta)) == pytest.approx(theta, abs=1e-12)


@pytest.mark.parametrize("bad", [0.0, -0.1, math.pi, 4.0])
def test_radius_from_angle_domain(bad):
    with pytest.raises(DomainError):
        radius_from_angle(bad)


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_angle_from_radius_domain(bad):
    with pytest.raises(DomainError):
        angle_from_radius(bad)


@given(st.floats(1e-6, math.pi - 1e-6))
def test_round_trip_property(theta):
    assert abs(angle_from_radius(radius_from_angle(theta)) - theta) < 1e-12


def test_radius_strictly_monotone():
    r = [radius_from_angle(t) for t in np.linspace(0.01, 3.1, 500)]
    assert all(b > a for a, b in zip(r, r[1:]))


def test_displace_identity_cases():
    u = np.array([0.0, 0.0, 1.0])
    v = np.array([1.0, 0.0, 0.0])
    assert np.allclose(displace(u, v, 0.0), u)
    assert np.allclose(displace(u, np.zeros(3), 0.5), u)


def test_displace_distance_is_arctan():
    u = np.array([0.0, 0.0, 1.0])
    v = np.array([0.0, 1.0, 0.0])
    assert angular_distance(u, displace(u, v, 0.1)) == pytest.approx(math.atan(0.1), abs=1e-13)


def test_displace_degenerate():
    with pytest.raises(DegenerateDisplacement):
        displace(np.array([0.0, 0.0, 1.0]), np.array([0.0, 0.0, -1.0]), 1.0)


def test_displace_is_second_order_exponential():
    rng = np.random.default_rng(3)
    for _ in range(50):
        u = unit(rng.normal(size=3))
        v = random_tangent(rng, u[None])[0]
        for t in (1e-3, 5e-4):
            err = np.linalg.norm(displace(u, v, t) - exp_map(u, v, t))
            assert err <= 1.0 * t * t * np.linalg.norm(v) ** 2


def test_rotate_cases():
    u = np.array([1.0, 0.0, 0.0])
    assert np.allclose(rotate(np.eye(3), u), u)
    assert np.allclose(rotate(rotation_about([0, 0, 1], math.pi), u), [-1, 0, 0], atol=1e-15)


def test_rotation_preserves_distances():
    rng = np.random.default_rng(0)
    for _ in range(1000):
        R = random_rotation(rng)
        assert is_rotation(R)
        u, v = unit(rng.normal(size=3)), unit(rng.normal(size=3))
        assert abs(angular_distance(rotate(R, u), rotate(R, v)) - angular_distance(u, v)) < 1e-12


@settings(max_examples=50)
@given(st.lists(st.floats(-10, 10), min_size=3, max_size=3).filter(lambda v: np.linalg.norm(v) > 1e-3))
def test_unit_has_unit_norm(v):
    assert abs(np.linalg.norm(unit(v)) - 1.0) < 1e-12
