"""Explicit deformation paths between 12-ball configurations.

Paths are chains of closed-form segments ``t -> (k, n, 3)`` evaluated on
whole arrays of times, so they can be checked at any resolution.  Labels
are carried through every segment: row ``k`` of every frame is ball ``k``.

* :func:`m6_path` deforms DOD into FCC or HCP by moving six balls.
* :func:`m5_path` rotates the five neighbours of a pole by 2pi/5.
* :func:`modified_m5_path` does the same for radii slightly above 1 by
  threading the five bottleneck configurations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Callable

import numpy as np
from scipy.optimize import minimize

from . import kernels
from .config import (
    DOD_Z_EQ,
    Configuration,
    align,
    as_points,
    dod,
    fcc,
    hcp,
    m5_frame,
    polar_triangle_angle,
    rotate_to_pole,
)
from .geometry import (
    angle_from_radius,
    angular_distance,
    radius_from_angle,
    rot_z,
    rotation_about,
    sph,
    tangent_part,
    unit,
)

JOINT_TOL = 1e-10
VIOLATION_TOL = 1e-9
ALPHA_FCC = math.acos(math.sqrt(2.0 / 3.0))
DOD_POLAR = math.atan(2.0)  # angle between neighbouring icosahedron vertices
ZETA = 2.0 * math.pi / 5.0 - math.acos(1.0 / 3.0)

#: maximal radius of each bottleneck configuration, frozen from bottleneck_radius
R1 = (1.002431076, 1.000869730, 1.000583421, 1.000869730, 1.002431076)


class InfeasibleMove(ValueError):
    """The requested move does not exist at this radius."""


class NumericError(RuntimeError):
    pass


# ------------------------------------------------------------------ segments


@dataclass(frozen=True)
class Segment:
    """One phase of a path.  ``evaluator`` maps a 1-d array of times in
    [0, 1] to an array of frames of shape ``(len(t), n, 3)``."""

    kind: str
    evaluator: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    params: dict = field(default_factory=dict)

    def __call__(self, t) -> np.ndarray:
        return self.evaluator(np.atleast_1d(np.asarray(t, dtype=float)))

    def relabeled(self, order) -> "Segment":
        """Frames whose ball ``k`` is this segment's ball ``order[k]``."""
        order = np.asarray(order)
        f = self.evaluator
        return Segment(self.kind, lambda t: f(t)[:, order], self.params)

    def transformed(self, R) -> "Segment":
        R = np.asarray(R, dtype=float)
        f = self.evaluator
        return Segment(self.kind, lambda t: f(t) @ R.T, self.params)

    def reversed(self) -> "Segment":
        f = self.evaluator
        return Segment(self.kind + "^-1", lambda t: f(1.0 - t), self.params)


def _const_segment(kind, X) -> Segment:
    X = np.array(X, dtype=float)
    return Segment(kind, lambda t: np.broadcast_to(X, (len(t),) + X.shape).copy())


def _lerp_segment(kind, A, B) -> Segment:
    """Normalised linear interpolation of every point from A to B."""
    A, B = np.array(A, float), np.array(B, float)

    def ev(t):
        F = (1.0 - t)[:, None, None] * A + t[:, None, None] * B
        return F / np.linalg.norm(F, axis=2, keepdims=True)

    return Segment(kind, ev)


def rotation_segment(X, axis, angle: float) -> Segment:
    X = np.array(as_points(X), float)
    axis = unit(np.asarray(axis, float))

    def ev(t):
        return np.stack([X @ rotation_about(axis, a).T for a in angle * t])

    return Segment("rotation", ev, {"axis": axis.tolist(), "angle": angle})


def _match_labels(X, Y, tol: float = JOINT_TOL) -> np.ndarray:
    """``q`` with ``Y[q[k]]`` equal to ``X[k]`` (chordal gap below tol)."""
    D = np.linalg.norm(X[:, None, :] - Y[None, :, :], axis=2)
    q = D.argmin(axis=1)
    if len(set(q.tolist())) != len(q) or D[np.arange(len(q)), q].max() > tol:
        raise ValueError("segments do not join")
    return q


@dataclass(frozen=True)
class DeformationPath:
    """Closed-form path in configuration space, run at ``radius``.

    The global parameter ``s`` in [0, 1] spends equal time in each segment.
    ``target`` optionally records the configuration the path should end at.
    """

    segments: tuple[Segment, ...]
    radius: float
    target: np.ndarray | None = field(default=None, repr=False)
    name: str = ""

    def __post_init__(self):
        if not self.segments:
            raise ValueError("a path needs at least one segment")
        object.__setattr__(self, "segments", tuple(self.segments))
        for a, b in zip(self.segments, self.segments[1:]):
            gap = float(np.linalg.norm(a(1.0)[0] - b(0.0)[0], axis=1).max())
            if gap >= JOINT_TOL:
                raise ValueError(f"gap {gap:.3g} between {a.kind} and {b.kind}")

    @property
    def n(self) -> int:
        return self.start.shape[0]

    @property
    def start(self) -> np.ndarray:
        return self.segments[0](0.0)[0]

    @property
    def end(self) -> np.ndarray:
        return self.segments[-1](1.0)[0]

    def frames(self, s) -> np.ndarray:
        s = np.clip(np.atleast_1d(np.asarray(s, float)), 0.0, 1.0)
        m = len(self.segments)
        idx = np.minimum((s * m).astype(int), m - 1)
        local = s * m - idx
        out = np.empty((len(s), self.n, 3))
        for k in np.unique(idx):
            sel = idx == k
            out[sel] = self.segments[k](local[sel])
        return out

    def __call__(self, s: float) -> Configuration:
        return Configuration(self.frames(s)[0], radius=self.radius)

    def reversed(self) -> "DeformationPath":
        segs = tuple(s.reversed() for s in reversed(self.segments))
        return DeformationPath(segs, self.radius, self.start.copy(), self.name + "^-1")

    def relabeled(self, order) -> "DeformationPath":
        tgt = None if self.target is None else self.target[np.asarray(order)]
        return DeformationPath(
            tuple(s.relabeled(order) for s in self.segments), self.radius, tgt, self.name
        )

    def transformed(self, R) -> "DeformationPath":
        tgt = None if self.target is None else self.target @ np.asarray(R).T
        return DeformationPath(
            tuple(s.transformed(R) for s in self.segments), self.radius, tgt, self.name
        )

    def then(self, other: "DeformationPath") -> "DeformationPath":
        """Concatenate, following ``other`` ball by ball from where each
        ball of this path ended.  Radii must agree."""
        q = _match_labels(self.end, other.start)
        nxt = other.relabeled(q)
        return DeformationPath(
            self.segments + nxt.segments,
            min(self.radius, other.radius),
            nxt.target,
            f"{self.name}+{other.name}",
        )

    def to_dict(self, samples: int = 5) -> dict:
        t = np.linspace(0.0, 1.0, samples)
        return {
            "name": self.name,
            "radius": self.radius,
            "segments": [
                {"kind": s.kind, "params": s.params, "keyframes": s(t).tolist()}
                for s in self.segments
            ],
        }


@dataclass(frozen=True)
class PathReport:
    min_separation: float
    interior_min_separation: float
    violation_times: list
    samples: int
    endpoint_match_rms: float

    @property
    def ok(self) -> bool:
        return not self.violation_times


def verify_path(path: DeformationPath, samples_per_segment: int = 10_000) -> PathReport:
    """Sample each segment uniformly and record the smallest separation.

    ``violation_times`` lists global times where the separation drops below
    the contact angle of ``path.radius`` by more than 1e-9.  The interior
    minimum excludes the two ends of the whole path.
    """
    if samples_per_segment < 2:
        raise ValueError("need at least two samples per segment")
    theta = angle_from_radius(path.radius)
    m = len(path.segments)
    t = np.linspace(0.0, 1.0, samples_per_segment)
    lo, lo_int, bad = math.inf, math.inf, []
    for k, seg in enumerate(path.segments):
        for c in range(0, samples_per_segment, 2500):
            tc = t[c : c + 2500]
            ms = kernels.min_separation_batch(np.ascontiguousarray(seg(tc)))
            s = (k + tc) / m
            lo = min(lo, float(ms.min()))
            inner = (s > 0.0) & (s < 1.0)
            if inner.any():
                lo_int = min(lo_int, float(ms[inner].min()))
            bad.extend(s[ms < theta - VIOLATION_TOL].tolist())
    rms = math.nan if path.target is None else align(path.end, path.target).rms
    return PathReport(lo, lo_int, bad, samples_per_segment * m, rms)


# ----------------------------------------------------------------------- M6


def phi_north(psi, polar_e, target) -> np.ndarray:
    """Smallest longitude increment ``phi >= 0`` at which a point at polar
    angle ``psi`` sits at least ``target`` from a point at polar angle
    ``polar_e`` on the zero meridian.  Vectorised bisection."""
    psi, polar_e, target = np.broadcast_arrays(
        *(np.asarray(a, float) for a in (psi, polar_e, target))
    )

    def dist(phi):
        c = np.cos(psi) * np.cos(polar_e) + np.sin(psi) * np.sin(polar_e) * np.cos(phi)
        return np.arccos(np.clip(c, -1.0, 1.0))

    lo = np.zeros(psi.shape)
    hi = np.full(psi.shape, math.pi)
    done = dist(lo) >= target
    for _ in range(64):
        mid = 0.5 * (lo + hi)
        ok = dist(mid) >= target
        hi = np.where(ok, mid, hi)
        lo = np.where(ok, lo, mid)
    return np.where(done, 0.0, hi)


def _m6_layout(psi, lat_e, phi_n, phi_s):
    """Frames for triangle polar angle ``psi``, band latitude ``lat_e``
    and triangle longitude increments, in DOD labels."""
    k = len(psi)
    F = np.empty((k, 12, 3))
    for a in range(3):
        F[:, a] = _sph_arr(psi, 2 * math.pi * a / 3 + phi_n)
        F[:, 9 + a] = _sph_arr(math.pi - psi, math.pi / 3 + 2 * math.pi * a / 3 + phi_s)
    for b in range(6):
        p = math.pi / 2 - lat_e if b % 2 else math.pi / 2 + lat_e
        F[:, 3 + b] = _sph_arr(p, b * math.pi / 3)
    return F


def _sph_arr(polar, lon) -> np.ndarray:
    polar, lon = np.broadcast_arrays(np.asarray(polar, float), np.asarray(lon, float))
    s = np.sin(polar)
    return np.stack([s * np.cos(lon), s * np.sin(lon), np.cos(polar)], axis=-1)


def m6_path(
    variant: str = "FCC",
    r: float = 1.0,
    interior_eps: float = 0.0,
    *,
    track_polar: bool = True,
) -> DeformationPath:
    """DOD to FCC (triangles turn the same way) or HCP (opposite ways).

    Phase 1 slides both polar triangles along their meridians to the
    parallels where each triangle closes up.  Phase 2 brings the six band
    balls to the equator at constant speed while the triangles turn just
    enough to stay clear of the rising band ball on their meridian.

    With ``interior_eps > 0`` the triangles stop ``interior_eps`` short of
    closing and every clearance carries a margin ``interior_eps * (1 - t)**2``
    that vanishes only at the end.  The square keeps the margin below the
    linearly shrinking clearance to the sinking band ball, so no two balls touch before ``t = 1``.
    ``track_polar=False`` withholds the rotation; the resulting path
    overlaps and only serves to exercise :func:`verify_path`.
    """
    variant = variant.upper()
    if variant not in ("FCC", "HCP"):
        raise ValueError("variant must be FCC or HCP")
    if not 0.0 < r <= 1.0:
        raise InfeasibleMove("the six-ball move needs 0 < r <= 1")
    if not 0.0 <= interior_eps < 0.05:
        raise ValueError("interior_eps must lie in [0, 0.05)")
    sgn = 1.0 if variant == "FCC" else -1.0
    th = math.pi / 3
    p0 = math.acos(dod().points[0, 2])
    lat0 = math.asin(DOD_Z_EQ)
    psi_start = polar_triangle_angle(th + interior_eps)
    alpha = np.vectorize(polar_triangle_angle)

    def phase1(t):
        psi = p0 + (psi_start - p0) * t
        z = np.zeros_like(t)
        return _m6_layout(psi, np.full_like(t, lat0), z, z)

    def phase2(t):
        margin = interior_eps * (1.0 - t) ** 2
        psi = alpha(th + margin) if interior_eps > 0 else np.full_like(t, ALPHA_FCC)
        lat = lat0 * (1.0 - t)
        if track_polar:
            phi = phi_north(psi, math.pi / 2 + lat, th + margin)
        else:
            phi = np.zeros_like(t)
        return _m6_layout(psi, lat, phi, sgn * phi)

    params = {"variant": variant, "interior_eps": interior_eps}
    segs = (Segment("m6-slide", phase1, params), Segment("m6-turn", phase2, params))
    target = (fcc() if variant == "FCC" else hcp()).points
    return DeformationPath(segs, r, target, f"M6-{variant}")


def phi_north_closed_form(psi: float, polar_e: float, target: float) -> float:
    """Spherical law of cosines solution of the tangency condition."""
    c = (math.cos(target) - math.cos(psi) * math.cos(polar_e)) / (
        math.sin(psi) * math.sin(polar_e)
    )
    return 0.0 if c >= 1.0 else math.acos(max(-1.0, c))


def lemma57_distances(t) -> tuple[np.ndarray, np.ndarray]:
    """``|AO|`` and ``|BO|`` for the isosceles clearance triangle.

    ``A`` is the band ball on the zero meridian (rising), ``B`` the one at
    longitude pi/3 (sinking), ``O`` the point of the closed-triangle
    parallel on the perpendicular bisector of ``AB``.
    """
    t = np.atleast_1d(np.asarray(t, float))
    lat = math.asin(DOD_Z_EQ) * (1.0 - t)
    A = _sph_arr(math.pi / 2 + lat, 0.0)
    B = _sph_arr(math.pi / 2 - lat, math.pi / 3)
    D = sph(math.pi / 2, math.pi / 6)
    tab = unit(tangent_part(D, B))
    nrm = np.cross(D, tab)
    b = math.cos(ALPHA_FCC) / nrm[..., 2]
    O = np.sqrt(1.0 - b * b)[:, None] * D + b[:, None] * nrm
    return angular_distance(A, O), angular_distance(B, O)


def lemma57_check(t_grid) -> bool:
    t = np.asarray(t_grid, float)
    if np.any((t <= 0.0) | (t >= 1.0)):
        raise ValueError("t values must lie in (0, 1)")
    ao, bo = lemma57_distances(t)
    return bool(np.all(np.abs(ao - bo) < 1e-12) and np.all(ao > math.pi / 3))


def rotation_path(X, axis, angle: float, r: float = 1.0) -> DeformationPath:
    seg = rotation_segment(X, axis, angle)
    return DeformationPath((seg,), r, seg(1.0)[0], "rotation")


def fcc_fourfold_axis() -> np.ndarray:
    """A square-face axis of the cuboctahedron chart (deterministic)."""
    X = fcc().points
    for i, j in combinations(range(12), 2):
        if abs(X[i] @ X[j]) < 1e-9:
            a = unit(X[i] + X[j])
            Y = X @ rotation_about(a, math.pi / 2).T
            try:
                _match_labels(Y, X, 1e-9)
            except ValueError:
                continue
            return a
    raise NumericError("no fourfold axis found")


def sigma1_path() -> DeformationPath:
    """DOD -> FCC, a quarter turn of FCC, then the six-ball move backwards."""
    m6 = m6_path("FCC", 1.0)
    turn = rotation_path(m6.end, fcc_fourfold_axis(), math.pi / 2)
    back = m6.reversed()
    return m6.then(turn).then(back)


# ----------------------------------------------------------------------- M5


@lru_cache(maxsize=None)
def _pole_frame(pole: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Rotation R and labels L with ``dod()[L[f]] @ R.T == m5_frame(...)[f]``."""
    X = dod().points
    if not 0 <= pole < 12:
        raise ValueError("pole must be a label in 0..11")
    R0 = rotate_to_pole(X[pole])
    Y = X @ R0.T
    nb = [k for k in range(12) if k != pole and abs(Y[k, 2] - math.cos(DOD_POLAR)) < 1e-9]
    lon = np.arctan2(Y[:, 1], Y[:, 0])
    R = rot_z(-lon[min(nb)]) @ R0
    Y = X @ R.T
    F = m5_frame(DOD_POLAR, 0.0).points
    labels = _match_labels(F, Y, 1e-9)
    return R, tuple(int(v) for v in labels)


def _m5_frames(polar_u, shift_u):
    """``m5_frame`` evaluated on arrays of polar angles and shifts."""
    k = len(polar_u)
    F = np.empty((k, 12, 3))
    F[:, 0] = [0.0, 0.0, 1.0]
    F[:, 11] = [0.0, 0.0, -1.0]
    for i in range(5):
        F[:, 1 + i] = _sph_arr(polar_u, 2 * math.pi * i / 5 + shift_u)
        F[:, 6 + i] = _sph_arr(math.pi - polar_u, 2 * math.pi * i / 5 + math.pi / 5)
    return F


def _slide_segments(theta: float, turn: float):
    """Phase 1 (neighbours slide to touch the poles) and phase 3 (back)."""

    def ph1(t):
        return _m5_frames(DOD_POLAR + (theta - DOD_POLAR) * t, np.zeros_like(t))

    def ph3(t):
        return _m5_frames(theta + (DOD_POLAR - theta) * t, np.full_like(t, turn))

    return Segment("m5-slide", ph1), Segment("m5-return", ph3)


def _frame_to_pole(path_segs, pole: int, r: float, direction: int, name: str) -> DeformationPath:
    R, labels = _pole_frame(pole)
    inv = np.argsort(labels)  # dod label -> frame label
    segs = tuple(s.transformed(R.T).relabeled(inv) for s in path_segs)
    end = segs[-1](1.0)[0]
    return DeformationPath(segs, r, end, f"{name}({pole},{direction:+d})")


def _check_pole_direction(pole, direction):
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    if not 0 <= pole < 12:
        raise ValueError("pole must be a label in 0..11")


def m5_path(pole: int = 0, direction: int = 1, r: float = 1.0) -> DeformationPath:
    """Turn the five neighbours of ``pole`` in DOD by ``direction * 2pi/5``.

    The neighbours first slide along their meridians until they touch the
    pole ball (the five antipodal neighbours mirror them), the pole and its
    neighbours then turn rigidly, and the slide is undone.
    """
    _check_pole_direction(pole, direction)
    if not 0.0 < r <= 1.0:
        raise InfeasibleMove("the unmodified five-ball move needs 0 < r <= 1")
    theta = angle_from_radius(r)
    turn = direction * 2 * math.pi / 5
    s1, s3 = _slide_segments(theta, turn)

    def ph2(t):
        return _m5_frames(np.full_like(t, theta), turn * t)

    return _frame_to_pole((s1, Segment("m5-turn", ph2), s3), pole, r, direction, "M5")


def m5_phase_gap(r: float = 1.0) -> float:
    """Longitude slack between adjacent neighbours after the first phase."""
    theta = angle_from_radius(r)
    c = (math.cos(theta) - math.cos(theta) ** 2) / math.sin(theta) ** 2
    return 2 * math.pi / 5 - math.acos(c)


# --------------------------------------------------------------- bottleneck

N_, S_ = 0, 11
_PAIRS = np.array(list(combinations(range(12), 2)))

#: the touching patterns as usually listed, beyond the common chain
LISTED_PATTERNS = {
    1: [(1, 2), (7, 3), (8, 4), (9, 5), (10, 6)],
    2: [(2, 3), (8, 4), (9, 5), (10, 6), (1, 2)],
    3: [(3, 4), (9, 5), (10, 6), (1, 7), (2, 3)],
    4: [(4, 5), (10, 6), (1, 7), (2, 8), (3, 4)],
    5: [(10, 6), (1, 7), (2, 8), (3, 9), (4, 5)],
}


def listed_contacts(j: int) -> frozenset[tuple[int, int]]:
    e = set()
    for i in range(1, 6):
        e |= {(N_, i), (i, 5 + i), (5 + i, S_)}
    for a, b in LISTED_PATTERNS[j]:
        e.add((min(a, b), max(a, b)))
    return frozenset(e)


def contact_name(k: int) -> str:
    if k == N_:
        return "N"
    if k == S_:
        return "S"
    return f"U{k}" if k <= 5 else f"V{k - 5}"


@dataclass(frozen=True)
class BottleneckResult:
    j: int
    r1_j: float
    theta: float
    config: Configuration
    contacts: tuple[tuple[int, int], ...]

    def contact_names(self) -> list[str]:
        return [contact_name(a) + contact_name(b) for a, b in self.contacts]


def _chain(j: int, th: float) -> dict[int, np.ndarray]:
    """N - U_j - V_j - S on the zero meridian, symmetric about z = 0."""
    a = math.pi / 2 - 1.5 * th  # below zero: N lies just past the pole
    return {
        j: sph(math.pi / 2 - th / 2, 0.0),
        5 + j: sph(math.pi / 2 + th / 2, 0.0),
        N_: np.array([math.sin(a), 0.0, math.cos(a)]),
        S_: np.array([math.sin(a), 0.0, -math.cos(a)]),
    }


def _bn_build(j, z, th=None):
    th = z[-1] if th is None else th
    ch = _chain(j, th)
    X = np.zeros((12, 3))
    free = [k for k in range(12) if k not in ch]
    for k, v in ch.items():
        X[k] = v
    P = z[: 3 * len(free)].reshape(-1, 3)
    X[free] = P / np.linalg.norm(P, axis=1)[:, None]
    return X


def _bn_seed(j: int, th: float, d: float) -> np.ndarray:
    """Halfway configuration, columns left of j nudged one way and right
    of j the other, turned so column j is on the zero meridian."""
    X = np.zeros((12, 3))
    for i in range(1, 6):
        v = 2 * math.pi * (i - 1) / 5 + math.pi / 5
        off = 0.0 if i == j else (d if i < j else -d)
        X[i] = sph(math.pi / 3, v + off)
        X[5 + i] = sph(2 * math.pi / 3, v)
    X = X @ rot_z(-(2 * math.pi * (j - 1) / 5 + math.pi / 5)).T
    free = [k for k in range(12) if k not in _chain(j, th)]
    return X[free].ravel()


def _bn_constraints(j: int, th_fixed: float | None = None):
    ch = {N_, j, 5 + j, S_}
    oth = np.array([p for p in map(tuple, _PAIRS) if not (p[0] in ch and p[1] in ch)])
    cols = [i for i in range(1, 6) if i != j]
    sg = np.array([1.0 if i < j else -1.0 for i in cols])

    def sep(z):
        X = _bn_build(j, z, th_fixed)
        c = np.einsum("ij,ij->i", X[oth[:, 0]], X[oth[:, 1]])
        return np.arccos(np.clip(c, -1.0, 1.0))

    def order(z):
        # columns left of j stay left of their V, those right stay right
        X = _bn_build(j, z, th_fixed)
        return np.array([-s * np.cross(X[i], X[5 + i])[2] for s, i in zip(sg, cols)])

    return sep, order


def _solve_bottleneck(j: int, d: float):
    sep, order = _bn_constraints(j)
    z0 = np.concatenate([_bn_seed(j, math.pi / 3, d), [math.pi / 3]])
    jac = np.zeros_like(z0)
    jac[-1] = -1.0
    res = minimize(
        lambda z: -z[-1], z0, jac=lambda z: jac, method="SLSQP",
        constraints=[
            {"type": "ineq", "fun": lambda z: sep(z) - z[-1]},
            {"type": "ineq", "fun": order},
        ],
        options={"maxiter": 5000, "ftol": 1e-15},
    )
    X = _bn_build(j, res.x)
    th = float(res.x[-1])
    ok = kernels.min_separation(X) >= th - 1e-10 and np.all(order(res.x) >= -1e-10)
    return ok, th, X


@lru_cache(maxsize=None)
def bottleneck_radius(j: int) -> BottleneckResult:
    """Largest radius at which column ``j`` can pass: U_j sits directly
    above V_j with N, U_j, V_j, S touching in a chain along one meridian,
    while the other four columns keep their side of the crossing."""
    if j not in range(1, 6):
        raise ValueError("j must be in 1..5")
    best = None
    for d in (0.01, 0.005, 0.02):
        ok, th, X = _solve_bottleneck(j, d)
        if ok and (best is None or th > best[0] + 1e-12):
            best = (th, X)
    if best is None:
        raise NumericError(f"no feasible configuration found for j={j}")
    th, X = best
    A = np.arccos(np.clip(X @ X.T, -1.0, 1.0))
    contacts = tuple((a, b) for a, b in combinations(range(12), 2) if abs(A[a, b] - th) < 1e-7)
    return BottleneckResult(j, radius_from_angle(th), th, Configuration(X), contacts)


def bottleneck_slack(j: int, r: float, starts: int = 8, seed: int = 0) -> float:
    """Best clearance ``min(other pairs) - theta(r)`` found with the chain
    fixed at ``theta(r)``; positive means the pattern fits at ``r``."""
    th = angle_from_radius(r)
    sep, order = _bn_constraints(j, th)
    rng = np.random.default_rng(seed)
    sol = bottleneck_radius(j).config.points
    free = [k for k in range(12) if k not in _chain(j, th)]
    seeds = [sol[free].ravel(), _bn_seed(j, th, 0.01)]
    while len(seeds) < starts:
        seeds.append(_bn_seed(j, th, float(rng.uniform(0.002, 0.03))) + rng.normal(0, 0.01, 24))
    best = -math.inf
    for z0 in seeds:
        z0 = np.concatenate([z0, [0.0]])
        jac = np.zeros_like(z0)
        jac[-1] = -1.0
        res = minimize(
            lambda z: -z[-1], z0, jac=lambda z: jac, method="SLSQP",
            constraints=[
                {"type": "ineq", "fun": lambda z: sep(z) - th - z[-1]},
                {"type": "ineq", "fun": order},
            ],
            options={"maxiter": 2000, "ftol": 1e-15},
        )
        if np.all(order(res.x) >= -1e-10):
            best = max(best, float(sep(res.x).min() - th))
    return best


def bottleneck_min() -> float:
    return min(bottleneck_radius(j).r1_j for j in range(1, 6))


# ------------------------------------------------------------- modified M5

_FRAMES_PER_LEG = 40


def _sep_and_jac(z):
    """Pair angles of the normalised rows of ``z`` and their Jacobian."""
    Z = z.reshape(12, 3)
    n = np.linalg.norm(Z, axis=1)
    X = Z / n[:, None]
    I, J = _PAIRS[:, 0], _PAIRS[:, 1]
    c = np.clip(np.einsum("ij,ij->i", X[I], X[J]), -1 + 1e-15, 1 - 1e-15)
    f = -1.0 / np.sqrt(1.0 - c * c)
    Jm = np.zeros((len(_PAIRS), 12, 3))
    rows = np.arange(len(_PAIRS))
    Jm[rows, I] = f[:, None] * (X[J] - c[:, None] * X[I]) / n[I][:, None]
    Jm[rows, J] = f[:, None] * (X[I] - c[:, None] * X[J]) / n[J][:, None]
    return np.arccos(c), Jm.reshape(len(_PAIRS), 36)


def _project(T, start, th):
    """Nearest configuration to ``T`` whose pairs are all at least ``th``."""
    t = T.ravel()
    res = minimize(
        lambda z: ((z - t) @ (z - t), 2 * (z - t)), start.ravel(), jac=True, method="SLSQP",
        constraints=[{
            "type": "ineq",
            "fun": lambda z: _sep_and_jac(z)[0] - th,
            "jac": lambda z: _sep_and_jac(z)[1],
        }],
        options={"maxiter": 500, "ftol": 1e-16},
    )
    return unit(res.x.reshape(12, 3))


@lru_cache(maxsize=8)
def _modified_keyframes(r: float) -> tuple[np.ndarray, ...]:
    """Keyframes for the turn at radius ``r``, one array per leg.

    Legs run from the touching-ring configuration through the five
    bottleneck configurations in order and on to the turned ring.  Each
    keyframe is the target of a normalised linear blend, pushed out to a
    separation halfway between theta(r) and the bottleneck angle.
    """
    th = angle_from_radius(r)
    th_min = min(bottleneck_radius(j).theta for j in range(1, 6))
    th_key = th + 0.5 * (th_min - th)
    keys = [m5_frame(th, 0.0).points]
    for j in range(1, 6):
        B = bottleneck_radius(j).config.points
        keys.append(B @ rot_z(2 * math.pi * (j - 1) / 5 + math.pi / 5).T)
    keys.append(m5_frame(th, 2 * math.pi / 5).points)
    legs, prev = [], keys[0]
    for a, b in zip(keys, keys[1:]):
        leg = [prev]
        for s in np.linspace(0.0, 1.0, _FRAMES_PER_LEG + 1)[1:]:
            leg.append(_project(unit((1 - s) * a + s * b), leg[-1], th_key))
        legs.append(leg)
        prev = leg[-1]
    # pin the ends exactly to the ring configurations
    legs[0][0] = keys[0]
    legs[-1][-1] = keys[-1]
    return tuple(_refine_leg(leg, th, th_key) for leg in legs)


def _refine_leg(leg, th: float, th_key: float, probes: int = 64, depth: int = 16) -> np.ndarray:
    """Split keyframe intervals whose blend sags below ``th``.

    Blending away from a touching keyframe loses separation to second
    order, so intervals next to one are halved, with each new midpoint
    projected out to ``th_key``, until the blend stays admissible.
    """
    s = np.linspace(0.0, 1.0, probes + 2)[1:-1, None, None]
    out = [leg[0]]
    stack = [(leg[k], 0) for k in range(len(leg) - 1, 0, -1)]
    while stack:
        b, d = stack.pop()
        a = out[-1]
        F = (1 - s) * a + s * b
        F /= np.linalg.norm(F, axis=2, keepdims=True)
        if d < depth and kernels.min_separation_batch(F).min() < th:
            m = _project(unit(0.5 * (a + b)), unit(0.5 * (a + b)), th_key)
            stack += [(b, d + 1), (m, d + 1)]
        else:
            out.append(b)
    return np.array(out)


def _keyframe_segment(kind, K) -> Segment:
    K = np.array(K, float)
    m = len(K) - 1

    def ev(t):
        u = np.clip(t, 0.0, 1.0) * m
        i = np.minimum(u.astype(int), m - 1)
        w = (u - i)[:, None, None]
        F = (1.0 - w) * K[i] + w * K[i + 1]
        return F / np.linalg.norm(F, axis=2, keepdims=True)

    return Segment(kind, ev, {"keyframes": m + 1})


_MIRROR = np.diag([1.0, -1.0, 1.0])


def modified_m5_path(pole: int = 0, direction: int = 1, r: float = 1.0001) -> DeformationPath:
    """The five-ball move for ``1 < r <= r1``.

    The turn is staggered so the columns pass one at a time, each through
    its bottleneck configuration.  The opposite direction is the mirror
    image in the plane y = 0 of the frame.
    """
    _check_pole_direction(pole, direction)
    if r <= 1.0:
        raise InfeasibleMove("use m5_path for r <= 1")
    r1 = bottleneck_min()
    if r > r1:
        raise InfeasibleMove(f"r = {r} exceeds the bottleneck radius {r1:.9f}")
    theta = angle_from_radius(r)
    legs = _modified_keyframes(float(r))
    s1, s3 = _slide_segments(theta, 2 * math.pi / 5)
    segs = [s1] + [_keyframe_segment(f"m5-pass{j}", K) for j, K in enumerate(legs)] + [s3]
    if direction < 0:
        base = segs[0](0.0)[0]
        segs = [s.transformed(_MIRROR) for s in segs]
        q = _match_labels(base, segs[0](0.0)[0], 1e-9)
        segs = [s.relabeled(q) for s in segs]
    return _frame_to_pole(tuple(segs), pole, r, direction, "M5mod")


__all__ = [
    "BottleneckResult",
    "DeformationPath",
    "InfeasibleMove",
    "NumericError",
    "PathReport",
    "R1",
    "Segment",
    "ZETA",
    "bottleneck_min",
    "bottleneck_radius",
    "bottleneck_slack",
    "fcc_fourfold_axis",
    "lemma57_check",
    "lemma57_distances",
    "m5_path",
    "m5_phase_gap",
    "m6_path",
    "modified_m5_path",
    "phi_north",
    "phi_north_closed_form",
    "rotation_path",
    "sigma1_path",
    "verify_path",
]
