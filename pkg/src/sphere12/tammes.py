"""Multi-start maximin solver for N points on the sphere.

Each restart ascends a softmin surrogate of the minimum pairwise angle
with a sharpening schedule.  The best candidates are then polished by a
sequential tangent-space LP and, where the active contact set allows, a
Gauss-Newton solve of the active equations.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from . import kernels
from .config import Configuration, min_separation
from .criticality import BalanceCertificate, is_balanced
from .geometry import radius_from_angle, tangent_part, unit

#: best known maximin angles in degrees
TABLE1_DEG = {
    3: 120.0, 4: 109.4712, 5: 90.0, 6: 90.0, 7: 77.8695, 8: 74.8585, 9: 70.5288,
    10: 66.1468, 11: 63.4349, 12: 63.4349, 13: 57.1367, 14: 55.6706, 24: 43.6908,
}

#: integer minimal polynomials of r_max(N), ascending coefficients
TABLE2 = {
    3: [-3, -6, 1],
    4: [-2, -4, 1],
    6: [-1, -2, 1],
    7: [1, 6, 12, 8, -3, -6, 1],
    8: [2, 8, 4, -8, 1],
    9: [-1, -2, 2],
    10: [-1, -6, -4, 24, 17, -30, 4],
    12: [1, 4, 1, -6, 1],
    24: [-1, -6, -5, 20, 23, -10, 1],
}

BETAS = (100.0, 1000.0, 10000.0, 100000.0)


@dataclass(frozen=True)
class TammesResult:
    n: int
    theta: float
    radius: float
    config: Configuration
    restarts_used: int
    certificate: BalanceCertificate
    #: best ascent value after each restart, in restart order
    best_so_far: tuple[float, ...] = field(default=(), repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "theta": self.theta,
            "theta_deg": math.degrees(self.theta),
            "radius": self.radius,
            "restarts_used": self.restarts_used,
            "certificate": self.certificate.to_dict(),
            "config": self.config.to_dict(),
        }


# ------------------------------------------------------------------ ascent


def softmin_ascent(X, betas=BETAS, iters: int = 400) -> np.ndarray:
    """Projected gradient ascent with backtracking on each softmin stage."""
    X = unit(X)
    for beta in betas:
        f, g = kernels.softmin_grad(X, beta)
        step = 0.1
        for _ in range(iters):
            G = tangent_part(X, g)
            gn2 = float(np.sum(G * G))
            if gn2 < 1e-24:
                break
            while step > 1e-14:
                Y = unit(X + step * G)
                fy, gy = kernels.softmin_grad(Y, beta)
                if fy >= f + 1e-4 * step * gn2:
                    break
                step *= 0.5
            else:
                break
            gain = fy - f
            X, f, g = Y, fy, gy
            step = min(step * 2.0, 1.0)
            if gain < 1e-13:
                break
    return X


def _tangent_basis(X):
    """Two orthonormal tangent vectors per row of X."""
    a = np.where(np.abs(X[:, [0]]) < 0.9, [[1.0, 0.0, 0.0]], [[0.0, 1.0, 0.0]])
    e1 = unit(tangent_part(X, a))
    e2 = np.cross(X, e1)
    return e1, e2


def _pair_jacobian(X, pairs, e1, e2):
    """Rows: d theta_ij / d (tangent coords) for the listed pairs."""
    i, j = pairs[:, 0], pairs[:, 1]
    c = np.clip(np.einsum("pa,pa->p", X[i], X[j]), -1.0, 1.0)
    s = np.sqrt(np.maximum(1.0 - c * c, 1e-300))
    n = len(X)
    J = np.zeros((len(pairs), 2 * n))
    r = np.arange(len(pairs))
    gi = -X[j] / s[:, None]
    gj = -X[i] / s[:, None]
    J[r, 2 * i] = np.einsum("pa,pa->p", gi, e1[i])
    J[r, 2 * i + 1] = np.einsum("pa,pa->p", gi, e2[i])
    J[r, 2 * j] = np.einsum("pa,pa->p", gj, e1[j])
    J[r, 2 * j + 1] = np.einsum("pa,pa->p", gj, e2[j])
    return J, np.arccos(c)


def _move(X, d, e1, e2):
    d = d.reshape(-1, 2)
    return unit(X + d[:, [0]] * e1 + d[:, [1]] * e2)


def _all_pairs(n):
    return np.array(np.triu_indices(n, 1)).T


def lp_polish(X, iters: int = 200, cap: float = 1e-2, slack_tol: float = 1e-12) -> np.ndarray:
    """Sequential LP: maximise t subject to linearised pair angles >= t.

    Pairs within the window that a capped step can reach are constrained;
    the cap shrinks whenever a step fails to raise the true minimum.
    """
    X = unit(X)
    n = len(X)
    P = _all_pairs(n)
    m = min_separation(X)
    for _ in range(iters):
        e1, e2 = _tangent_basis(X)
        J, th = _pair_jacobian(X, P, e1, e2)
        near = th <= m + max(1e-6, 3.0 * cap)
        Jn, tn = J[near], th[near]
        # variables d (2n), t ; maximise t
        c = np.zeros(2 * n + 1)
        c[-1] = -1.0
        A_ub = np.hstack([-Jn, np.ones((len(tn), 1))])
        b_ub = tn
        bounds = [(-cap, cap)] * (2 * n) + [(None, None)]
        res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
        if res.status != 0:
            break
        pred = res.x[-1] - m
        Y = _move(X, res.x[:-1], e1, e2)
        mY = min_separation(Y)
        if mY > m:
            X, m = Y, mY
            if pred < slack_tol:
                break
        else:
            cap *= 0.25
            if cap < 1e-13:
                break
    return X


def active_set_refine(X, tol: float = 1e-7, iters: int = 30) -> np.ndarray:
    """Gauss-Newton on {theta_ij = theta for active pairs} with theta free.

    Minimum-norm steps handle the rotational gauge; the result is kept only
    if it does not lower the true minimum separation.
    """
    X0 = unit(X)
    n = len(X0)
    P = _all_pairs(n)
    A = np.arccos(np.clip(np.einsum("pa,pa->p", X0[P[:, 0]], X0[P[:, 1]]), -1, 1))
    m0 = A.min()
    act = P[A <= m0 + tol]
    X, theta = X0, m0
    for _ in range(iters):
        e1, e2 = _tangent_basis(X)
        J, th = _pair_jacobian(X, act, e1, e2)
        F = th - theta
        if np.abs(F).max() < 1e-15:
            break
        M = np.hstack([J, -np.ones((len(act), 1))])
        step = np.linalg.lstsq(M, -F, rcond=1e-12)[0]
        X = _move(X, step[:-1], e1, e2)
        theta += step[-1]
    m = min_separation(X)
    return X if m >= m0 - 1e-14 else X0


def _restart(args):
    n, seed, k = args
    rng = np.random.default_rng([seed, k])
    X = softmin_ascent(unit(rng.normal(size=(n, 3))))
    return k, X, min_separation(X)


def _workers() -> int:
    env = os.environ.get("SPHERE12_THREADS")
    cap = int(env) if env and env.isdigit() and int(env) > 0 else (os.cpu_count() or 1)
    return max(1, cap)


def default_restarts(n: int) -> int:
    """Restart budget used when none is given; the larger budget is for the
    two sizes whose optima are hard to hit from random starts."""
    return 2000 if n in (13, 14) else 200


def solve(n: int, restarts: int | None = None, seed: int = 0, polish_top: int = 8) -> TammesResult:
    """Best configuration found over ``restarts`` independent ascents.

    The ``polish_top`` best ascents are polished; ties break by restart
    index, so the outcome does not depend on worker scheduling.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    if restarts is None:
        restarts = default_restarts(n)
    if restarts < 1:
        raise ValueError("restarts must be positive")
    jobs = [(n, seed, k) for k in range(restarts)]
    workers = min(_workers(), restarts)
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            runs = list(ex.map(_restart, jobs, chunksize=max(1, restarts // (4 * workers))))
    else:
        runs = [_restart(j) for j in jobs]
    history = np.maximum.accumulate([m for _, _, m in sorted(runs, key=lambda r: r[0])])
    runs.sort(key=lambda r: (-r[2], r[0]))
    best_X, best_m = None, -1.0
    for _, X, _ in runs[:polish_top]:
        Y = active_set_refine(lp_polish(X))
        m = min_separation(Y)
        if m > best_m + 1e-13:
            best_X, best_m = Y, m
    cfg = Configuration(best_X)
    return TammesResult(
        n=n,
        theta=best_m,
        radius=radius_from_angle(best_m),
        config=cfg,
        restarts_used=restarts,
        certificate=is_balanced(cfg, best_m, tol=1e-9),
        best_so_far=tuple(float(v) for v in history),
    )


def certify_polynomial(coeffs, r: float) -> float:
    """``|p(r)|`` for integer coefficients in ascending degree."""
    coeffs = list(coeffs)
    if not coeffs or coeffs[-1] == 0:
        raise ValueError("leading coefficient must be nonzero")
    return abs(float(np.polynomial.polynomial.polyval(r, coeffs)))


def robinson_gap(n: int, restarts: int = 200, seed: int = 0) -> dict:
    if n < 4:
        raise ValueError("n must be at least 4")
    a = solve(n, restarts, seed).radius
    b = solve(n - 1, restarts, seed).radius
    return {"r_N": a, "r_N_minus_1": b, "strict": a < b - 1e-6}
