import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _helpers import contract_to
from sphere12.config import (
    contact_graph,
    dod,
    fcc,
    hcp,
    m5_halfway,
    min_separation,
    ring,
    tet,
    theta5,
)
from sphere12.criticality import (
    DegenerateEdge,
    directional_gain,
    edge_tangent,
    first_critical_radius,
    force_system,
    improving_direction_probe,
    is_balanced,
    vertex_forces,
)
from sphere12.geometry import angle_from_radius, random_rotation, sph, unit

PI3 = math.pi / 3


def test_edge_tangent_orthogonal_pair():
    u, v = np.array([1.0, 0, 0]), np.array([0, 1.0, 0])
    assert np.allclose(edge_tangent(u, v), [0, 1, 0])
    assert np.allclose(edge_tangent(v, u), [1, 0, 0])


def test_edge_tangent_antipodal():
    with pytest.raises(DegenerateEdge):
        edge_tangent(np.array([0, 0, 1.0]), np.array([0, 0, -1.0]))


def test_force_system_tangency_and_norm():
    U = hcp()
    for i, incident in enumerate(force_system(U, contact_graph(U, PI3))):
        for _, T in incident:
            assert abs(T @ U.points[i]) < 1e-12
            assert abs(np.linalg.norm(T) - 1) < 1e-12


def test_ring4_and_fcc_equal_weight_sums():
    for U, th in ((ring(4), math.pi / 2), (fcc(), PI3)):
        G = contact_graph(U, th)
        F = vertex_forces(U, G.edges, np.ones(len(G.edges)))
        assert np.linalg.norm(F, axis=1).max() < 1e-12


def test_fcc_balanced_with_equal_weights():
    cert = is_balanced(fcc(), PI3)
    assert cert.balanced and cert.residual <= 1e-8
    w = [x for *_, x in cert.weights]
    assert sum(w) == pytest.approx(1.0, abs=1e-12)
    # equal weights are feasible, so the LP optimum is balanced
    assert len(w) == 24


def test_hcp_balanced():
    cert = is_balanced(hcp(), PI3)
    assert cert.balanced and cert.residual <= 1e-8
    assert all(w >= 0 for *_, w in cert.weights)


def test_dod_not_balanced():
    cert = is_balanced(dod(), PI3)
    assert not cert.balanced and cert.weights is None


@pytest.mark.parametrize("n", range(3, 13))
def test_ring_balanced_and_perturbed_ring_not(n):
    th = 2 * math.pi / n
    cert = is_balanced(ring(n), th)
    assert cert.balanced and cert.residual <= 1e-8
    w = [x for *_, x in cert.weights]
    assert np.allclose(w, 1.0 / n, atol=1e-9)
    X = ring(n).points.copy()
    X[0] = sph(math.pi / 2, 1e-3)
    assert not is_balanced(X, th - 2e-3).balanced


@pytest.mark.parametrize("gaps", [(2.0, 2.0, 2 * math.pi - 4.0), (1.7, 2.2, 2 * math.pi - 3.9),
                                  (2.9, 1.65, 2 * math.pi - 4.55)])
def test_theta5_balanced(gaps):
    cert = is_balanced(theta5(*gaps), math.pi / 2)
    assert cert.balanced
    # the certificate uses all six spokes
    assert all(w > 0 for *_, w in cert.weights)


def test_m5_halfway_balanced():
    assert is_balanced(m5_halfway(), PI3).balanced


def test_certificate_json():
    d = json.loads(is_balanced(ring(3), 2 * math.pi / 3).to_json())
    assert d["balanced"] is True and len(d["weights"]) == 3
    assert set(d) == {"balanced", "weights", "residual"}


def test_positive_certificates_are_long_enough():
    for U, th in ((fcc(), PI3), (hcp(), PI3), (ring(7), 2 * math.pi / 7), (m5_halfway(), PI3)):
        assert is_balanced(U, th).support_length(th) >= 2 * math.pi - 1e-9


def test_random_configurations_not_balanced():
    rng = np.random.default_rng(11)
    for _ in range(100):
        X = unit(rng.normal(size=(12, 3)))
        assert not is_balanced(X, min_separation(X)).balanced


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_balance_is_rotation_equivariant(seed):
    rng = np.random.default_rng(seed)
    R = random_rotation(rng)
    for U, th in ((fcc(), PI3), (ring(5), 2 * math.pi / 5), (dod(), PI3)):
        assert is_balanced(U, th).balanced == is_balanced(U.rotated(R), th).balanced


def test_first_critical_radius_values():
    # the 4-Ring touches at pi/2, the same radius as the octahedron
    assert first_critical_radius(4) == pytest.approx(1 + math.sqrt(2), abs=1e-12)
    assert angle_from_radius(first_critical_radius(4)) == pytest.approx(math.pi / 2, abs=1e-12)
    assert first_critical_radius(3) == pytest.approx(3 + 2 * math.sqrt(3), abs=1e-12)
    assert first_critical_radius(12) == pytest.approx(0.34920, abs=1e-5)
    with pytest.raises(ValueError):
        first_critical_radius(2)


@pytest.mark.xfail(strict=True, reason="1+2*sqrt(2) is not the radius of the 4-Ring at pi/2")
def test_first_critical_radius_four_is_not_one_plus_two_root_two():
    assert first_critical_radius(4) == pytest.approx(1 + 2 * math.sqrt(2), abs=1e-12)


@pytest.mark.parametrize("U", [fcc(), hcp(), ring(5), ring(12), m5_halfway()], ids=["fcc", "hcp", "ring5", "ring12", "m5h"])
def test_balanced_means_no_first_order_gain(U):
    assert not improving_direction_probe(U, samples=1000, seed=3)["improving"]


def test_tet_probe_finds_nothing():
    assert not improving_direction_probe(tet(), samples=10_000, seed=4)["improving"]


def test_ring4_saddle_direction():
    U = ring(4)
    assert not improving_direction_probe(U, samples=10_000, seed=5)["improving"]
    V = np.zeros((4, 3))
    V[[0, 2]] = [0, 0, 1]
    V[[1, 3]] = [0, 0, -1]
    for t in (1e-2, 1e-3):
        g = directional_gain(U, V, t)
        # no first-order gain, but a positive second-order one
        assert 0 < g < 10 * t * t
        assert g / t**2 == pytest.approx(0.5, rel=1e-3)


def test_random_configurations_improvable():
    rng = np.random.default_rng(21)
    hits = sum(
        improving_direction_probe(rng.normal(size=(12, 3)), samples=20, seed=1000 + k)["improving"]
        for k in range(100)
    )
    assert hits == 100


def test_probe_rejects_bad_samples():
    with pytest.raises(ValueError):
        improving_direction_probe(fcc(), samples=0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.05, math.pi / 2 - 0.01))
def test_no_balanced_four_point_configuration_below_ring(seed, th):
    rng = np.random.default_rng(seed)
    X = unit(rng.normal(size=(4, 3)))
    # contract towards the mean direction until the closest pair is at th
    c = unit(X.mean(axis=0)) if np.linalg.norm(X.mean(axis=0)) > 1e-6 else X[0]
    Y = contract_to(X, c, th)
    if Y is not None:
        assert not is_balanced(Y, th).balanced
