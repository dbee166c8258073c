"""Shared constructions for the test suite."""

import math

import numpy as np

from sphere12.config import min_separation
from sphere12.geometry import sph, unit

# Betti numbers of the pure braid group, N = 1..9
BRAID = {
    1: [1],
    2: [1, 1],
    3: [1, 3, 2],
    4: [1, 6, 11, 6],
    5: [1, 10, 35, 50, 24],
    6: [1, 15, 85, 225, 274, 120],
    7: [1, 21, 175, 735, 1624, 1764, 720],
    8: [1, 28, 322, 1960, 6769, 13132, 13068, 5040],
    9: [1, 36, 546, 4536, 22449, 67284, 118124, 109584, 40320],
}

# Betti numbers of the reduced configuration space of N points on the sphere
REDUCED = {
    3: [1],
    4: [1, 2],
    5: [1, 5, 6],
    6: [1, 9, 26, 24],
    7: [1, 14, 71, 154, 120],
    8: [1, 20, 155, 580, 1044, 720],
    9: [1, 27, 295, 1665, 5104, 8028, 5040],
    10: [1, 35, 511, 4025, 18424, 48860, 69264, 40320],
    11: [1, 44, 826, 8624, 54649, 214676, 509004, 663696, 362880],
    12: [1, 54, 1266, 16884, 140889, 761166, 2655764, 5753736, 6999840, 3628800],
}


def contract(X, c, s):
    """Pull every point towards ``c`` along its geodesic, scaling angles by s."""
    X = np.asarray(X, float)
    cosa = np.clip(X @ c, -1.0, 1.0)
    a = np.arccos(cosa)[:, None]
    W = X - cosa[:, None] * c
    n = np.linalg.norm(W, axis=1, keepdims=True)
    W = np.where(n > 1e-15, W / np.where(n > 0, n, 1.0), 0.0)
    return np.cos(s * a) * c + np.sin(s * a) * W


def contract_to(X, c, th, iters=80):
    """Contraction of X whose minimum separation equals ``th``, or None."""
    if min_separation(X) < th:
        return None
    lo, hi = 0.0, 1.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if min_separation(contract(X, c, mid)) < th:
            lo = mid
        else:
            hi = mid
    Y = contract(X, c, hi)
    return Y if abs(min_separation(Y) - th) < 1e-12 else None


def small_circle_square(th):
    """Four points on a circle of latitude, neighbours ``th`` apart."""
    # chord between neighbours: 2 sin(th/2) = sqrt(2) sin(p)
    p = math.asin(2 * math.sin(th / 2) / math.sqrt(2))
    return np.array([sph(p, k * math.pi / 2) for k in range(4)])


def star(th):
    """A pole with three spokes of length ``th`` at 120 degrees."""
    return np.array([[0.0, 0.0, 1.0]] + [sph(th, 2 * math.pi * k / 3) for k in range(3)])


def great_circle_chain(th):
    """Four points on the equator spaced ``th`` apart."""
    return np.array([sph(math.pi / 2, k * th) for k in range(4)])


def random_four(rng):
    """A perturbed tetrahedron; its closest pair is well above pi/2."""
    T = unit(np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], float))
    return unit(T + 0.15 * rng.normal(size=(4, 3)))
