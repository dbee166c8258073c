"""Closed-form invariants of the configuration spaces at small radius.

Coefficients are Python integers, so nothing overflows.
"""

from __future__ import annotations

from math import factorial


def _expand(factors: range) -> list[int]:
    coeffs = [1]
    for k in factors:
        nxt = coeffs + [0]
        for d, c in enumerate(coeffs):
            nxt[d + 1] += k * c
        coeffs = nxt
    return coeffs


def poincare_polynomial(n: int, reduced: bool = False) -> list[int]:
    """Betti numbers (ascending degree) of the ordered configuration space.

    Unreduced: ``(1+t)(1+2t)...(1+(n-1)t)``, the braid-arrangement
    polynomial.  Reduced (modulo rotations): ``(1+2t)...(1+(n-2)t)``.
    """
    if reduced:
        if n < 3:
            raise ValueError("reduced polynomial needs n >= 3")
        return _expand(range(2, n - 1))
    if n < 1:
        raise ValueError("n must be positive")
    return _expand(range(1, n))


def evaluate(coeffs: list[int], t: int) -> int:
    return sum(c * t**k for k, c in enumerate(coeffs))


def euler_characteristic(n: int) -> int:
    if n < 3:
        raise ValueError("n must be at least 3")
    chi = (-1) ** (n - 3) * factorial(n - 3)
    assert chi == evaluate(poincare_polynomial(n, reduced=True), -1)
    return chi


def stirling1(n: int, k: int) -> int:
    """Unsigned Stirling number of the first kind, by the usual recurrence."""
    row = [1]
    for m in range(1, n + 1):
        new = [0] * (m + 1)
        for j in range(1, m + 1):
            new[j] = (row[j - 1] if j - 1 < len(row) else 0) + (m - 1) * (row[j] if j < len(row) else 0)
        row = new
    return row[k] if 0 <= k < len(row) else 0


def stirling_check(n: int, k: int) -> bool:
    if not 0 <= k <= n - 1:
        raise ValueError("k out of range")
    return poincare_polynomial(n)[k] == stirling1(n, n - k)


def component_count(n: int, aut_orders: list[int]) -> int:
    """``sum n!/|Aut|`` over the listed symmetry-group orders."""
    total = 0
    for a in aut_orders:
        if a <= 0 or factorial(n) % a:
            raise ValueError(f"{a} does not divide {n}!")
        total += factorial(n) // a
    return total


def morse_euler_check_n4(maxima: int = 2, saddles: int = 3) -> bool:
    """Indexed count of the critical points for four points versus chi."""
    return maxima - saddles == euler_characteristic(4)


def betti_table(rows: range, reduced: bool = False) -> str:
    lines = []
    for n in rows:
        coeffs = poincare_polynomial(n, reduced)
        lines.append(f"{n:>3} " + " ".join(f"{c:>9}" for c in coeffs))
    return "\n".join(lines)
