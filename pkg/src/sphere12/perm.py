"""Permutations induced by closed deformation paths and the groups they
generate.

``Permutation`` stores images: ball ``k`` ends in slot ``p[k]``.  The
product ``p * q`` applies ``q`` first, so following path A by path B
induces ``perm(B) * perm(A)``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass

import numpy as np

from .config import as_points
from .geometry import DomainError, angular_distance

MATCH_ACCEPT = 1e-3
MATCH_REJECT = 0.1


class MatchingError(ValueError):
    pass


@dataclass(frozen=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        im = tuple(int(i) for i in self.images)
        if sorted(im) != list(range(len(im))):
            raise ValueError(f"not a bijection: {im}")
        object.__setattr__(self, "images", im)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles) -> "Permutation":
        im = list(range(n))
        for c in cycles:
            for a, b in zip(c, c[1:] + c[:1]):
                im[a] = b
        return cls(tuple(im))

    def __len__(self):
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation(tuple(self.images[i] for i in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for k, v in enumerate(self.images):
            inv[v] = k
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(k == v for k, v in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest element."""
        seen, out = set(), []
        for s in range(len(self.images)):
            if s in seen:
                continue
            c, k = [], s
            while k not in seen:
                seen.add(k)
                c.append(k)
                k = self.images[k]
            if len(c) > 1:
                out.append(tuple(c))
        return out

    def cycle_type(self) -> list[int]:
        return sorted((len(c) for c in self.cycles()), reverse=True)

    def to_json(self) -> str:
        return json.dumps(list(self.images))


def parity(p: Permutation) -> str:
    return "even" if sum(len(c) - 1 for c in p.cycles()) % 2 == 0 else "odd"


def _frame(u, v) -> np.ndarray:
    e1 = u / np.linalg.norm(u)
    e2 = v - (v @ e1) * e1
    e2 /= np.linalg.norm(e2)
    return np.column_stack([e1, e2, np.cross(e1, e2)])


def set_alignments(X, Y, tol: float = MATCH_ACCEPT) -> list[np.ndarray]:
    """Rotations taking the point set X onto the point set Y, ignoring labels.

    Two well-separated points of X are sent to every pair of Y at the same
    angle; a candidate survives if every rotated point lands within ``tol``
    of some point of Y.
    """
    X, Y = as_points(X), as_points(Y)
    a = X[0]
    cosines = np.abs(X @ a)
    cosines[0] = np.inf
    i = int(np.argmin(cosines))
    ang = float(angular_distance(a, X[i]))
    FX = _frame(a, X[i])
    AY = angular_distance(Y[:, None, :], Y[None, :, :])
    out = []
    for c, d in zip(*np.nonzero(np.abs(AY - ang) < 2 * tol)):
        if c == d:
            continue
        R = _frame(Y[c], Y[d]) @ FX.T
        D = angular_distance((X @ R.T)[:, None, :], Y[None, :, :])
        if D.min(axis=1).max() < tol:
            out.append(R)
    return out


def induced_permutation(endpoint, reference) -> Permutation:
    """Label bijection taking the endpoint's balls to reference slots.

    The endpoint is first rotated onto the reference point set by the
    rotation closest to the identity; every ball must then sit within 1e-3
    rad of one reference point, with the runner-up more than 0.1 rad away.
    """
    X, Y = as_points(endpoint), as_points(reference)
    if X.shape != Y.shape:
        raise DomainError("endpoint and reference differ in size")
    rots = set_alignments(X, Y)
    if not rots:
        raise DomainError("endpoint is not a relabeling of the reference")
    R = max(rots, key=np.trace)
    D = angular_distance((X @ R.T)[:, None, :], Y[None, :, :])
    order = np.argsort(D, axis=1)
    rows = np.arange(len(D))
    if D[rows, order[:, 1]].min() <= MATCH_REJECT:
        raise MatchingError("ambiguous nearest-point matching")
    im = order[:, 0]
    if len(set(im.tolist())) != len(im):
        raise MatchingError("nearest-point matching is not a bijection")
    return Permutation(tuple(im.tolist()))


def path_permutation(path, reference) -> Permutation:
    return induced_permutation(path.end, reference)


# ------------------------------------------------------------ Schreier-Sims


class StabilizerChain:
    """Base and strong generating set built by the Schreier-Sims algorithm.

    Random products of the generators are sifted first (cheap, usually
    completes the chain); a deterministic pass over every Schreier
    generator then certifies it, so the order is exact.
    """

    def __init__(self, gens, n: int | None = None, seed: int = 12345):
        gens = [g.images if isinstance(g, Permutation) else tuple(g) for g in gens]
        self.n = n if n is not None else (len(gens[0]) if gens else 0)
        self.base: list[int] = []
        self.strong: list[list[tuple[int, ...]]] = []
        self.trans: list[dict[int, tuple[int, ...]]] = []
        self.ident = tuple(range(self.n))
        gens = [g for g in gens if g != self.ident]
        for g in gens:
            self._add_generator(g)
        rnd = random.Random(seed)
        if gens:
            for _ in range(20 * self.n):
                w = self.ident
                for _ in range(8):
                    w = _mul(w, rnd.choice(gens))
                self._add_generator(w)
        self._complete()

    # images convention inside the chain: (a then b)[i] = b[a[i]]
    def _orbit(self, level: int):
        b = self.base[level]
        t = {b: self.ident}
        queue = [b]
        for x in queue:
            for s in self.strong[level]:
                y = s[x]
                if y not in t:
                    t[y] = _mul(t[x], s)
                    queue.append(y)
        self.trans[level] = t

    def _strip(self, g, start: int = 0):
        for i in range(start, len(self.base)):
            x = g[self.base[i]]
            if x not in self.trans[i]:
                return g, i
            g = _mul(g, _inv(self.trans[i][x]))
        return g, len(self.base)

    def _new_level(self, g):
        b = next(k for k in range(self.n) if g[k] != k)
        self.base.append(b)
        self.strong.append([])
        self.trans.append({b: self.ident})

    def _add_generator(self, g, start: int = 0) -> bool:
        h, j = self._strip(g, start)
        if h == self.ident:
            return False
        if j == len(self.base):
            self._new_level(h)
        for lvl in range(start, j + 1):
            if h not in self.strong[lvl]:
                self.strong[lvl].append(h)
        for lvl in range(start, j + 1):
            self._orbit(lvl)
        return True

    def _complete(self):
        i = len(self.base) - 1
        while i >= 0:
            changed = False
            for x, u in list(self.trans[i].items()):
                for s in list(self.strong[i]):
                    y = s[x]
                    sg = _mul(_mul(u, s), _inv(self.trans[i][y]))
                    if sg != self.ident and self._add_generator(sg, i + 1):
                        changed = True
                        break
                if changed:
                    break
            if changed:
                i = len(self.base) - 1
            else:
                i -= 1

    def orbit_lengths(self) -> list[int]:
        """Lengths of the fundamental orbits, one per base point."""
        return [len(t) for t in self.trans]

    def order(self) -> int:
        out = 1
        for k in self.orbit_lengths():
            out *= k
        return out

    def contains(self, g) -> bool:
        g = g.images if isinstance(g, Permutation) else tuple(g)
        h, _ = self._strip(g)
        return h == self.ident


def _mul(a, b):
    return tuple(b[i] for i in a)


def _inv(a):
    out = [0] * len(a)
    for i, v in enumerate(a):
        out[v] = i
    return tuple(out)


def generated_group_order(gens) -> int:
    gens = list(gens)
    if not gens:
        return 1
    return StabilizerChain(gens).order()


def closure_order(gens) -> int:
    """Brute-force group order by breadth-first closure; for small groups."""
    gens = [g.images if isinstance(g, Permutation) else tuple(g) for g in gens]
    if not gens:
        return 1
    ident = tuple(range(len(gens[0])))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = _mul(a, g)
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return len(seen)


def symmetry_order(U, tol: float = 1e-6) -> int:
    """Number of rotations mapping the point set onto itself."""
    return len(set_alignments(U, U, tol))


def component_lower_bound_check(r: float, samples_per_segment: int = 1000, compositions: int = 50,
                                seed: int = 0) -> dict:
    """Parity census of the moves available at radius ``r``.

    For ``1 < r <= r1`` only the modified five-ball moves exist; every
    induced permutation and every random product of them should be even.
    At ``r <= 1`` the six-ball composite supplies an odd permutation.
    Paths are verified before their permutations are counted.
    """
    from .config import dod
    from .moves import m5_path, modified_m5_path, sigma1_path, verify_path

    build = modified_m5_path if r > 1.0 else m5_path
    ref = dod()
    gens = []
    for pole in range(12):
        path = build(pole, 1, r)
        if not verify_path(path, samples_per_segment).ok:
            raise DomainError(f"move at pole {pole} is not valid at r = {r}")
        gens.append(induced_permutation(path.end, ref))
    if r <= 1.0:
        gens.append(induced_permutation(sigma1_path().end, ref))
    rng = random.Random(seed)
    census = {"even": 0, "odd": 0}
    for _ in range(compositions):
        p = Permutation.identity(12)
        for g in rng.choices(gens, k=rng.randint(1, 12)):
            p = g * p
        census[parity(p)] += 1
    odd_gens = sum(parity(g) == "odd" for g in gens)
    return {
        "radius": r,
        "generators": [list(g.images) for g in gens],
        "group_order": generated_group_order(gens),
        "odd_generators": odd_gens,
        "composition_parity": census,
        "even_odd_separated_evidence": odd_gens == 0 and census["odd"] == 0,
    }
