"""Pure-numpy reference kernels.  The compiled module ``_kernels`` exposes the
same three functions with identical semantics."""

import numpy as np

_PAIRS: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _pairs(n):
    if n not in _PAIRS:
        _PAIRS[n] = np.triu_indices(n, 1)
    return _PAIRS[n]


def min_separation(X):
    """Smallest pairwise central angle among the rows of ``X``."""
    X = np.ascontiguousarray(X, dtype=float)
    G = X @ X.T
    i, j = _pairs(len(X))
    return float(np.arccos(min(1.0, max(-1.0, G[i, j].max()))))


def min_separation_batch(F):
    """``min_separation`` for each frame of a ``(k, n, 3)`` stack."""
    F = np.ascontiguousarray(F, dtype=float)
    G = np.einsum("kia,kja->kij", F, F)
    i, j = _pairs(F.shape[1])
    return np.arccos(np.clip(G[:, i, j].max(axis=1), -1.0, 1.0))


def softmin_grad(X, beta):
    """Value and ambient gradient of ``-(1/beta) log sum_{i<j} exp(-beta theta_ij)``."""
    X = np.ascontiguousarray(X, dtype=float)
    n = len(X)
    i, j = _pairs(n)
    c = np.clip(np.einsum("pa,pa->p", X[i], X[j]), -1.0, 1.0)
    th = np.arccos(c)
    m = th.min()
    e = np.exp(-beta * (th - m))
    s = e.sum()
    val = m - np.log(s) / beta
    w = e / s
    k = w / np.maximum(np.sqrt(1.0 - c * c), 1e-12)
    gi = -k[:, None] * (X[j] - c[:, None] * X[i])
    gj = -k[:, None] * (X[i] - c[:, None] * X[j])
    g = np.zeros_like(X)
    np.add.at(g, i, gi)
    np.add.at(g, j, gj)
    return float(val), g
