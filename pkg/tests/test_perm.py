import json
import math
import random
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphere12.config import dod, fcc, hcp, m5_halfway, tet
from sphere12.geometry import DomainError, random_rotation
from sphere12.moves import m5_path, m6_path, rotation_path, sigma1_path
from sphere12.perm import (
    MatchingError,
    Permutation,
    StabilizerChain,
    closure_order,
    component_lower_bound_check,
    generated_group_order,
    induced_permutation,
    parity,
    set_alignments,
    symmetry_order,
)

D = dod()


def five_cycles():
    return [induced_permutation(m5_path(p, 1).end, D) for p in range(12)]


def test_permutation_basics():
    p = Permutation.from_cycles(6, [(0, 1, 2)])
    q = Permutation.from_cycles(6, [(2, 3)])
    assert p(0) == 1 and p(2) == 0
    # q first, then p
    assert (p * q)(3) == p(2) == 0
    assert (p * p.inverse()).is_identity()
    assert p.cycles() == [(0, 1, 2)] and p.cycle_type() == [3]
    assert json.loads(p.to_json()) == [1, 2, 0, 3, 4, 5]
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))


def test_parity():
    assert parity(Permutation.identity(12)) == "even"
    assert parity(Permutation.from_cycles(12, [(0, 1, 2, 3, 4)])) == "even"
    assert parity(Permutation.from_cycles(12, [(0, 1, 2, 3), (4, 5, 6, 7), (8, 9, 10, 11)])) == "odd"
    assert parity(Permutation.from_cycles(3, [(0, 1)])) == "odd"


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_parity_is_a_homomorphism(seed):
    rng = random.Random(seed)
    a = Permutation(tuple(rng.sample(range(9), 9)))
    b = Permutation(tuple(rng.sample(range(9), 9)))
    same = parity(a) == parity(b)
    assert (parity(a * b) == "even") == same


def test_small_group_orders():
    assert generated_group_order([Permutation.from_cycles(12, [(0, 1, 2, 3, 4)])]) == 5
    assert generated_group_order([]) == 1
    s5 = [Permutation.from_cycles(5, [(0, 1)]), Permutation.from_cycles(5, [(0, 1, 2, 3, 4)])]
    assert generated_group_order(s5) == 120
    a5 = [Permutation.from_cycles(5, [(0, 1, 2)]), Permutation.from_cycles(5, [(0, 1, 2, 3, 4)])]
    assert generated_group_order(a5) == 60


def test_symmetric_group_twelve():
    gens = [Permutation.from_cycles(12, [(0, 1)]), Permutation.from_cycles(12, [tuple(range(12))])]
    assert generated_group_order(gens) == math.factorial(12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(4, 7), st.integers(1, 3))
def test_schreier_sims_matches_closure(seed, n, k):
    rng = random.Random(seed)
    gens = [Permutation(tuple(rng.sample(range(n), n))) for _ in range(k)]
    order = closure_order(gens)
    assert order <= 10**4
    assert generated_group_order(gens) == order


def test_chain_order_is_product_of_orbits():
    gens = five_cycles()
    chain = StabilizerChain(gens)
    assert chain.order() == math.prod(chain.orbit_lengths())
    assert chain.contains(gens[0] * gens[1])
    assert not chain.contains(Permutation.from_cycles(12, [(0, 1)]))


def test_m5_cycles_generate_alternating_group():
    t0 = time.perf_counter()
    gens = five_cycles()
    assert all(g.cycle_type() == [5] for g in gens)
    assert generated_group_order(gens) == 239500800
    sigma1 = induced_permutation(sigma1_path().end, D)
    assert generated_group_order(gens + [sigma1]) == 479001600
    assert time.perf_counter() - t0 < 10


def test_sigma1_three_four_cycles():
    s = induced_permutation(sigma1_path().end, D)
    assert s.cycle_type() == [4, 4, 4] and parity(s) == "odd"


def test_identity_path():
    path = rotation_path(D.points, [0.3, 0.1, 1.0], 0.0)
    assert induced_permutation(path.end, D).is_identity()


def test_rotation_by_symmetry():
    # a fifth of a turn about a vertex permutes its five neighbours
    path = rotation_path(D.points, D.points[0], 2 * math.pi / 5)
    p = induced_permutation(path.end, D)
    assert sorted(p.cycle_type()) == [5, 5]


def test_m5_direction_inverts():
    for pole in (0, 5, 11):
        a = induced_permutation(m5_path(pole, 1).end, D)
        b = induced_permutation(m5_path(pole, -1).end, D)
        assert a * b == Permutation.identity(12)


def test_functorial_on_concatenation():
    rng = random.Random(4)
    for _ in range(5):
        legs = [m5_path(rng.randrange(12), rng.choice((1, -1))) for _ in range(3)]
        path, expected = legs[0], induced_permutation(legs[0].end, D)
        for leg in legs[1:]:
            path = path.then(leg)
            expected = induced_permutation(leg.end, D) * expected
        assert induced_permutation(path.end, D) == expected


def test_m6_round_trip_is_identity():
    for variant in ("FCC", "HCP"):
        m = m6_path(variant, 1.0)
        assert induced_permutation(m.then(m.reversed()).end, D).is_identity()


def test_sampling_density_does_not_change_permutation():
    path = sigma1_path()
    coarse = path.frames(np.linspace(0, 1, 11))[-1]
    fine = path.frames(np.linspace(0, 1, 2001))[-1]
    assert induced_permutation(coarse, D) == induced_permutation(fine, D)


def test_rotating_endpoint_changes_labels_only_by_a_symmetry():
    R = random_rotation(np.random.default_rng(8))
    X = m5_path(2, 1).end
    p = induced_permutation(X, D)
    q = induced_permutation(X @ R.T, D)
    sym = [induced_permutation(D.points @ S.T, D) for S in set_alignments(D, D)]
    assert q * p.inverse() in sym
    assert parity(q) == parity(p)


def test_not_a_relabeling():
    with pytest.raises(DomainError):
        induced_permutation(fcc(), D)
    with pytest.raises(DomainError):
        induced_permutation(tet(), D)


def test_ambiguous_match():
    X = D.points.copy()
    # move one ball halfway towards a neighbour; no rotation fits, but the
    # matcher must not guess either
    Y = m5_halfway().points
    with pytest.raises((MatchingError, DomainError)):
        induced_permutation(Y, D)
    X[1] = D.points[1] + 0.0
    assert induced_permutation(X, D).is_identity()


def test_matching_error_on_clustered_reference():
    ref = D.points.copy()
    ref[1] = ref[0] + np.array([1e-2, 0, 0])
    ref[1] /= np.linalg.norm(ref[1])
    with pytest.raises(MatchingError):
        induced_permutation(ref, ref)


def test_symmetry_orders():
    assert symmetry_order(D) == 60
    assert symmetry_order(fcc()) == 24
    assert symmetry_order(hcp()) == 6


def test_component_census_at_one():
    d = component_lower_bound_check(1.0, samples_per_segment=200, compositions=20)
    assert d["odd_generators"] == 1
    assert d["group_order"] == 479001600
    assert d["even_odd_separated_evidence"] is False


@pytest.mark.slow
def test_component_census_above_one():
    for r in (1.0001, 1.0005):
        d = component_lower_bound_check(r, samples_per_segment=500, compositions=50)
        assert d["odd_generators"] == 0
        assert d["composition_parity"] == {"even": 50, "odd": 0}
        assert d["group_order"] == 239500800
        assert d["even_odd_separated_evidence"] is True
