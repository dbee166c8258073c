"""Spherical primitives: angular metric, radius/angle conversion, tangent
displacement and rotations.

Points are plain ``numpy`` arrays of shape ``(3,)`` (or ``(n, 3)`` for
batches).  All angles are radians.
"""

from __future__ import annotations

import numpy as np

UNIT_TOL = 1e-12


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class DegenerateDisplacement(ArithmeticError):
    """The displaced vector has (numerically) zero norm."""


def unit(v) -> np.ndarray:
    """Return ``v`` scaled to unit length (rows, for a 2-d array)."""
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    if np.any(n == 0.0):
        raise DegenerateDisplacement("cannot normalize a zero vector")
    return v / n


def sph(polar: float, lon: float) -> np.ndarray:
    """Unit vector with the given polar angle (from +z) and longitude."""
    s = np.sin(polar)
    return np.array([s * np.cos(lon), s * np.sin(lon), np.cos(polar)])


def angular_distance(u, v) -> float | np.ndarray:
    """Central angle between unit vectors; broadcasts over leading axes."""
    d = np.sum(np.asarray(u) * np.asarray(v), axis=-1)
    return np.arccos(np.clip(d, -1.0, 1.0))


def radius_from_angle(theta: float) -> float:
    """Radius of equal balls touching the unit ball whose centres subtend
    ``theta`` when the balls touch each other."""
    if not 0.0 < theta < np.pi:
        raise DomainError(f"angle must lie in (0, pi), got {theta!r}")
    # 1 - sin(theta/2) written without cancellation near theta = pi
    return float(np.sin(theta / 2.0) / (2.0 * np.sin((np.pi - theta) / 4.0) ** 2))


def angle_from_radius(r: float) -> float:
    if not r > 0.0:
        raise DomainError(f"radius must be positive, got {r!r}")
    # 2 arcsin(r / (1 + r)), in a form that stays accurate as r grows
    return float(2.0 * np.arctan2(r, np.sqrt(1.0 + 2.0 * r)))


def tangent_part(u, v) -> np.ndarray:
    """Component of ``v`` orthogonal to the unit vector ``u``."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return v - np.sum(u * v, axis=-1, keepdims=True) * u


def displace(u, v, t: float) -> np.ndarray:
    """``normalize(u + t v)``: the projected straight-line move along a
    tangent vector ``v`` based at ``u``."""
    w = np.asarray(u, dtype=float) + t * np.asarray(v, dtype=float)
    n = np.linalg.norm(w, axis=-1, keepdims=True)
    if np.any(n < 1e-15):
        raise DegenerateDisplacement("u + t v vanishes")
    return w / n


def exp_map(u, v, t: float = 1.0) -> np.ndarray:
    """Geodesic exponential map at ``u`` applied to ``t v``."""
    u = np.asarray(u, dtype=float)
    w = t * np.asarray(v, dtype=float)
    a = np.linalg.norm(w, axis=-1, keepdims=True)
    safe = np.where(a > 0, a, 1.0)
    return np.cos(a) * u + np.where(a > 0, np.sin(a) / safe, 1.0) * w


def rotation_about(axis, angle: float) -> np.ndarray:
    """Rodrigues rotation matrix."""
    k = unit(axis)
    K = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
    return np.eye(3) + np.sin(angle) * K + (1.0 - np.cos(angle)) * (K @ K)


def rot_z(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def is_rotation(R, tol: float = UNIT_TOL) -> bool:
    R = np.asarray(R, dtype=float)
    return (
        R.shape == (3, 3)
        and np.allclose(R.T @ R, np.eye(3), atol=tol, rtol=0.0)
        and abs(np.linalg.det(R) - 1.0) <= tol
    )


def rotate(R, u) -> np.ndarray:
    """Apply ``R`` to one point or to every row of an ``(n, 3)`` array."""
    return unit(np.asarray(u, dtype=float) @ np.asarray(R, dtype=float).T)


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    """Haar-random element of SO(3) via a random unit quaternion."""
    q = unit(rng.normal(size=4))
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)],
            [2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)],
            [2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)],
        ]
    )


def random_tangent(rng: np.random.Generator, X) -> np.ndarray:
    """Random tangent field on the rows of ``X`` (Gaussian, then projected)."""
    X = np.asarray(X, dtype=float)
    return tangent_part(X, rng.normal(size=X.shape))


def longitude(u) -> float | np.ndarray:
    u = np.asarray(u)
    return np.arctan2(u[..., 1], u[..., 0])


def polar_angle(u) -> float | np.ndarray:
    u = np.asarray(u)
    return np.arccos(np.clip(u[..., 2], -1.0, 1.0))
