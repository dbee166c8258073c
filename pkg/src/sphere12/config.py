"""Labeled point configurations on the unit sphere.

A :class:`Configuration` is an immutable ``(n, 3)`` array of unit vectors;
label ``i`` is row ``i``.  This module also provides the reference charts
used throughout the package (:func:`named`), contact graphs, and rotation
alignment for comparing configurations modulo SO(3).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import kernels
from .geometry import DomainError, angle_from_radius, angular_distance, rot_z, sph, unit

PHI = (1.0 + math.sqrt(5.0)) / 2.0
#: height of the two triangular faces of the face-up icosahedron chart
DOD_H = PHI**2 / math.sqrt(3.0 * PHI**2 + 3.0)
#: height of the six equatorial-band vertices in the same chart
DOD_Z_EQ = DOD_H / PHI**3

CONTACT_TOL = 1e-9
LOAD_TOL = 1e-6


class InvalidConfiguration(ValueError):
    """Coincident points, wrong shape, or points off the sphere."""


class OverlapError(ValueError):
    """A pair is closer than the contact angle allows."""


@dataclass(frozen=True)
class Configuration:
    points: np.ndarray
    radius: float | None = None

    def __post_init__(self):
        P = np.array(self.points, dtype=float, copy=True)
        if P.ndim != 2 or P.shape[1] != 3 or len(P) < 2:
            raise InvalidConfiguration(f"expected an (n, 3) array, got shape {P.shape}")
        P = unit(P)
        P.setflags(write=False)
        object.__setattr__(self, "points", P)

    @property
    def n(self) -> int:
        return len(self.points)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def with_radius(self, r: float | None) -> "Configuration":
        return Configuration(self.points, r)

    def rotated(self, R) -> "Configuration":
        return Configuration(self.points @ np.asarray(R).T, self.radius)

    def relabeled(self, perm) -> "Configuration":
        """New configuration whose label ``k`` is the old label ``perm[k]``."""
        return Configuration(self.points[np.asarray(perm)], self.radius)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "radius": self.radius,
            "points": [[float(c) for c in p] for p in self.points],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "Configuration":
        try:
            pts = np.asarray(d["points"], dtype=float)
            n = int(d["n"])
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidConfiguration(f"malformed configuration: {e}") from e
        if pts.ndim != 2 or pts.shape != (n, 3):
            raise InvalidConfiguration("'points' must be an n x 3 list matching 'n'")
        if np.any(np.abs(np.linalg.norm(pts, axis=1) - 1.0) > LOAD_TOL):
            raise InvalidConfiguration("points are not unit vectors (tolerance 1e-6)")
        r = d.get("radius")
        return cls(pts, None if r is None else float(r))

    @classmethod
    def from_json(cls, text: str) -> "Configuration":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as e:
            raise InvalidConfiguration(f"invalid JSON: {e}") from e
        if not isinstance(d, dict):
            raise InvalidConfiguration("configuration JSON must be an object")
        return cls.from_dict(d)


def as_points(U) -> np.ndarray:
    return U.points if isinstance(U, Configuration) else np.asarray(U, dtype=float)


def pair_angles(U) -> np.ndarray:
    """Symmetric matrix of pairwise central angles (zero diagonal)."""
    X = as_points(U)
    A = np.arccos(np.clip(X @ X.T, -1.0, 1.0))
    np.fill_diagonal(A, 0.0)
    return A


def min_separation(U) -> float:
    return kernels.min_separation(as_points(U))


def injectivity_radius(U) -> float:
    d = min_separation(U)
    if d <= 1e-10:
        raise InvalidConfiguration("configuration has coincident points")
    return 0.5 * d


def is_member(U, r: float) -> bool:
    return 2.0 * injectivity_radius(U) >= angle_from_radius(r) - 1e-12


@dataclass(frozen=True)
class ContactGraph:
    n: int
    edges: tuple[tuple[int, int], ...]
    contact_angle: float
    tolerance: float = CONTACT_TOL

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    def total_length(self) -> float:
        return len(self.edges) * self.contact_angle


def contact_graph(U, theta: float, tol: float = CONTACT_TOL) -> ContactGraph:
    A = pair_angles(U)
    n = len(A)
    edges = []
    for i, j in combinations(range(n), 2):
        d = A[i, j]
        if d < theta - tol:
            raise OverlapError(f"pair ({i}, {j}) at {d!r} is closer than {theta!r} - {tol:g}")
        if d <= theta + tol:
            edges.append((i, j))
    return ContactGraph(n, tuple(edges), float(theta), float(tol))


# ---------------------------------------------------------------- named charts


def polar_triangle_angle(theta: float) -> float:
    """Polar angle of three points on one parallel, spaced 2pi/3 apart in
    longitude, whose pairwise distance is ``theta``."""
    c2 = (2.0 * math.cos(theta) + 1.0) / 3.0
    if not 0.0 <= c2 <= 1.0:
        raise ValueError(f"no polar triangle with side {theta!r}")
    return math.acos(math.sqrt(c2))


def dod() -> Configuration:
    """Icosahedron resting on a face.

    Labels 0-2: north triangle (z = h, longitudes 0, 2pi/3, 4pi/3).
    Labels 3-8: equatorial band at longitudes k pi/3, k = 0..5, alternately
    below (even k) and above (odd k) the equator.
    Labels 9-11: south triangle (z = -h, longitudes pi/3, pi, 5pi/3).
    """
    p_tri = math.acos(DOD_H)
    p_eq = math.acos(DOD_Z_EQ)
    pts = [sph(p_tri, 2 * math.pi * k / 3) for k in range(3)]
    for k in range(6):
        pts.append(sph(math.pi - p_eq if k % 2 == 0 else p_eq, k * math.pi / 3))
    pts += [sph(math.pi - p_tri, math.pi / 3 + 2 * math.pi * k / 3) for k in range(3)]
    return Configuration(np.array(pts))


def _close_packed(eclipsed: bool) -> Configuration:
    a = polar_triangle_angle(math.pi / 3)
    pts = [sph(a, math.pi / 6 + 2 * math.pi * k / 3) for k in range(3)]
    pts += [sph(math.pi / 2, k * math.pi / 3) for k in range(6)]
    shift = -math.pi / 6 if eclipsed else math.pi / 6
    pts += [sph(math.pi - a, math.pi / 3 + shift + 2 * math.pi * k / 3) for k in range(3)]
    return Configuration(np.array(pts))


def fcc() -> Configuration:
    """Cuboctahedron, labeled as the end of the M6 move from :func:`dod`."""
    return _close_packed(eclipsed=False)


def hcp() -> Configuration:
    """Triangular orthobicupola, labeled as the end of the HCP M6 move."""
    return _close_packed(eclipsed=True)


def tet() -> Configuration:
    return Configuration(np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], float))


def oct_() -> Configuration:
    return Configuration(np.vstack([np.eye(3), -np.eye(3)]))


def ring(n: int) -> Configuration:
    if n < 2:
        raise ValueError("a ring needs at least two points")
    return Configuration(np.array([sph(math.pi / 2, 2 * math.pi * k / n) for k in range(n)]))


def theta5(a1: float, a2: float, a3: float) -> Configuration:
    """Two poles plus three equatorial points with longitude gaps a1, a2, a3."""
    gaps = (a1, a2, a3)
    if any(not math.pi / 2 < a < math.pi for a in gaps) or abs(sum(gaps) - 2 * math.pi) > 1e-12:
        raise DomainError("THETA5 gaps must lie in (pi/2, pi) and sum to 2pi")
    lons = [0.0, a1, a1 + a2]
    pts = [[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]] + [sph(math.pi / 2, l) for l in lons]
    return Configuration(np.array(pts))


def m5_frame(polar_u: float, shift: float = 0.0) -> Configuration:
    """Pole-up 12-configuration used by the M5 move.

    Label 0 is the north pole N, labels 1-5 are U_1..U_5 at polar angle
    ``polar_u`` and longitudes ``2pi(i-1)/5 + shift``, labels 6-10 are
    V_1..V_5 at polar angle ``pi - polar_u`` and longitudes
    ``2pi(i-1)/5 + pi/5``, and label 11 is the south pole S.
    """
    pts = [[0.0, 0.0, 1.0]]
    pts += [sph(polar_u, 2 * math.pi * i / 5 + shift) for i in range(5)]
    pts += [sph(math.pi - polar_u, 2 * math.pi * i / 5 + math.pi / 5) for i in range(5)]
    pts.append([0.0, 0.0, -1.0])
    return Configuration(np.array(pts))


def m5_halfway() -> Configuration:
    """Every U_i directly above V_i, all at distance pi/3 along meridians."""
    return m5_frame(math.pi / 3, math.pi / 5)


def named(name: str, *args) -> Configuration:
    key = name.upper()
    if key == "RING":
        return ring(*args)
    if key == "THETA5":
        return theta5(*args)
    table = {
        "DOD": dod,
        "FCC": fcc,
        "HCP": hcp,
        "TET": tet,
        "OCT": oct_,
        "M5_HALFWAY": m5_halfway,
    }
    if key.startswith("RING(") and key.endswith(")"):
        return ring(int(key[5:-1]))
    if key not in table:
        raise ValueError(f"unknown configuration name {name!r}")
    return table[key]()


# ------------------------------------------------------------------ alignment


@dataclass(frozen=True)
class AlignmentResult:
    rotation: np.ndarray = field(repr=False)
    rms: float


def align(U, W) -> AlignmentResult:
    """Rotation R in SO(3) minimising sum |R u_i - w_i|^2 (Kabsch)."""
    X, Y = as_points(U), as_points(W)
    if X.shape != Y.shape:
        raise ValueError("configurations must have the same size")
    H = X.T @ Y
    A, _, Bt = np.linalg.svd(H)
    d = np.sign(np.linalg.det(Bt.T @ A.T)) or 1.0
    R = Bt.T @ np.diag([1.0, 1.0, d]) @ A.T
    res = X @ R.T - Y
    return AlignmentResult(R, float(np.sqrt(np.mean(np.sum(res * res, axis=1)))))


def equivalent_mod_rotation(U, W, tol: float = 1e-7) -> bool:
    return align(U, W).rms <= tol


def greedy_matching(X, Y) -> list[int]:
    """For each row of X, the index of a row of Y, chosen greedily by
    increasing angular distance."""
    A = angular_distance(np.asarray(X)[:, None, :], np.asarray(Y)[None, :, :])
    order = np.dstack(np.unravel_index(np.argsort(A, axis=None), A.shape))[0]
    match = [-1] * len(A)
    used = set()
    for i, j in order:
        if match[i] < 0 and j not in used:
            match[i] = int(j)
            used.add(int(j))
    return match


def rotate_to_pole(u) -> np.ndarray:
    """A rotation taking unit vector ``u`` to +z."""
    u = unit(u)
    z = np.array([0.0, 0.0, 1.0])
    v = np.cross(u, z)
    s, c = np.linalg.norm(v), float(u @ z)
    if s < 1e-15:
        return np.eye(3) if c > 0 else np.diag([1.0, -1.0, -1.0])
    K = np.array([[0, -v[2], v[1]], [v[2], 0, -v[0]], [-v[1], v[0], 0]]) / s
    ang = math.atan2(s, c)
    return np.eye(3) + math.sin(ang) * K + (1 - math.cos(ang)) * (K @ K)


__all__ = [
    "AlignmentResult",
    "Configuration",
    "ContactGraph",
    "InvalidConfiguration",
    "OverlapError",
    "align",
    "contact_graph",
    "dod",
    "equivalent_mod_rotation",
    "fcc",
    "hcp",
    "injectivity_radius",
    "is_member",
    "m5_frame",
    "m5_halfway",
    "min_separation",
    "named",
    "pair_angles",
    "ring",
    "rot_z",
    "tet",
    "theta5",
]
