"""Balanced stress graphs as certificates of criticality for the
injectivity radius, plus a randomized first-order probe.

A configuration is balanced at contact angle ``theta`` when non-negative,
not-all-zero weights on its contact edges make the unit edge tangents sum
to zero at every vertex.  Testing this is a small linear program.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .config import CONTACT_TOL, Configuration, ContactGraph, as_points, contact_graph
from .geometry import displace, tangent_part, unit

BALANCE_TOL = 1e-8


class DegenerateEdge(ValueError):
    """Edge endpoints are antipodal, so the tangent direction is undefined."""


class NumericError(RuntimeError):
    pass


def edge_tangent(u, v) -> np.ndarray:
    """Unit tangent at ``u`` pointing along the geodesic towards ``v``."""
    t = tangent_part(u, v)
    n = np.linalg.norm(t)
    if n < 1e-12:
        raise DegenerateEdge("tangent undefined for coincident or antipodal endpoints")
    return t / n


def force_system(U, G: ContactGraph) -> list[list[tuple[tuple[int, int], np.ndarray]]]:
    """Per vertex, the incident edges with their outward unit tangents."""
    X = as_points(U)
    out: list[list] = [[] for _ in range(len(X))]
    for i, j in G.edges:
        out[i].append(((i, j), edge_tangent(X[i], X[j])))
        out[j].append(((i, j), edge_tangent(X[j], X[i])))
    return out


def _force_matrix(X, edges) -> np.ndarray:
    """3n x m matrix whose column e stacks edge e's tangents at its ends."""
    A = np.zeros((3 * len(X), len(edges)))
    for e, (i, j) in enumerate(edges):
        A[3 * i : 3 * i + 3, e] = edge_tangent(X[i], X[j])
        A[3 * j : 3 * j + 3, e] = edge_tangent(X[j], X[i])
    return A


def vertex_forces(U, edges, weights) -> np.ndarray:
    X = as_points(U)
    return (_force_matrix(X, list(edges)) @ np.asarray(weights, float)).reshape(len(X), 3)


@dataclass(frozen=True)
class BalanceCertificate:
    balanced: bool
    weights: tuple[tuple[int, int, float], ...] | None
    residual: float

    def to_dict(self) -> dict:
        return {
            "balanced": self.balanced,
            "weights": [[i, j, w] for i, j, w in self.weights] if self.weights else [],
            "residual": self.residual,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def support_length(self, theta: float) -> float:
        if not self.weights:
            return 0.0
        return theta * sum(1 for *_, w in self.weights if w > 0.0)


def balance_lp(X, edges) -> tuple[np.ndarray, float]:
    """Minimise the largest force component over the weight simplex.

    Returns the weights and the largest per-vertex force norm they leave.
    """
    A = _force_matrix(X, edges)
    m = len(edges)
    # variables: w_1..w_m, s ; minimise s with -s <= A w <= s, sum w = 1
    c = np.zeros(m + 1)
    c[-1] = 1.0
    ones = np.ones((A.shape[0], 1))
    A_ub = np.block([[A, -ones], [-A, -ones]])
    b_ub = np.zeros(2 * A.shape[0])
    A_eq = np.zeros((1, m + 1))
    A_eq[0, :m] = 1.0
    res = linprog(
        c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=[1.0],
        bounds=[(0, None)] * m + [(0, None)], method="highs",
        options={"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10},
    )
    if res.status != 0:
        raise NumericError(f"balance LP failed: {res.message}")
    w = np.clip(res.x[:m], 0.0, None)
    w /= w.sum()
    resid = float(np.linalg.norm((A @ w).reshape(-1, 3), axis=1).max())
    # the simplex solution is only accurate to solver tolerance; re-solve
    # A_S w = 0, sum w = 1 on its support by least squares
    S = w > 1e-9
    M = np.vstack([A[:, S], np.ones((1, S.sum()))])
    rhs = np.zeros(M.shape[0])
    rhs[-1] = 1.0
    ws = np.linalg.lstsq(M, rhs, rcond=None)[0]
    if np.all(ws >= 0.0):
        w2 = np.zeros(m)
        w2[S] = ws / ws.sum()
        r2 = float(np.linalg.norm((A @ w2).reshape(-1, 3), axis=1).max())
        if r2 < resid:
            w, resid = w2, r2
    return w, resid


def is_balanced(U, theta: float, tol: float = CONTACT_TOL) -> BalanceCertificate:
    X = as_points(U)
    G = contact_graph(X, theta, tol)
    if not G.edges:
        return BalanceCertificate(False, None, math.inf)
    w, resid = balance_lp(X, list(G.edges))
    w[w < 1e-12] = 0.0
    w /= w.sum()
    ok = resid <= BALANCE_TOL
    cert = BalanceCertificate(
        ok, tuple((i, j, float(x)) for (i, j), x in zip(G.edges, w)), resid
    )
    if ok and cert.support_length(theta) < 2.0 * math.pi - 1e-9:
        # a balanced stress graph contains closed geodesics of length >= 2 pi
        raise NumericError("balanced certificate with total length below 2 pi")
    return cert


def first_critical_radius(n: int) -> float:
    """Radius at which the equally spaced ring becomes admissible."""
    if n < 3:
        raise ValueError("n must be at least 3")
    s = math.sin(math.pi / n)
    return s / (1.0 - s)


def rho(X) -> float:
    from .kernels import min_separation

    return 0.5 * min_separation(X)


def directional_gain(U, V, t: float) -> float:
    """``rho(U # tV) - rho(U)``."""
    X = as_points(U)
    return rho(displace(X, V, t)) - rho(X)


def improving_direction_probe(U, samples: int = 1000, step: float = 1e-5, seed: int = 0) -> dict:
    """Sample random unit tangent frames and report the best first-order gain.

    A gain above ``10 * step`` is first order; at a critical point gains are
    O(step).  A negative answer is evidence of criticality, not proof.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    X = (U if isinstance(U, Configuration) else Configuration(U)).points
    rng = np.random.default_rng(seed)
    r0 = rho(X)
    best = 0.0
    for _ in range(samples):
        T = tangent_part(X, rng.normal(size=X.shape))
        while np.linalg.norm(T, axis=1).min() < 1e-9:
            T = tangent_part(X, rng.normal(size=X.shape))
        V = unit(T)
        g = max(0.0, rho(displace(X, V, step)) - r0) / step
        best = max(best, g)
    return {"improving": best > 10.0 * step, "best_gain": best}
