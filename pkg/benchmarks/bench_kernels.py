"""Time the compiled kernels against the numpy fallback.

Run with ``python benchmarks/bench_kernels.py``.  Both backends are
imported directly, so the ``SPHERE12_PURE`` switch does not matter here.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from sphere12 import _kernels_py as py

try:
    from sphere12 import _kernels as cy
except ImportError:
    cy = None


def bench(label, fn, number):
    t = min(timeit.repeat(fn, number=number, repeat=5)) / number
    print(f"  {label:<10} {t * 1e6:10.1f} us")
    return t


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=12)
    ap.add_argument("--frames", type=int, default=2000)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(0)
    X = rng.normal(size=(args.n, 3))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    F = rng.normal(size=(args.frames, args.n, 3))
    F /= np.linalg.norm(F, axis=2, keepdims=True)

    backends = [("python", py)] + ([("compiled", cy)] if cy else [])
    if cy is None:
        print("compiled extension not built; timing the fallback only")
    cases = [
        ("min_separation", lambda m: (lambda: m.min_separation(X)), 2000),
        (f"min_separation_batch[{args.frames}]", lambda m: (lambda: m.min_separation_batch(F)), 20),
        ("softmin_grad", lambda m: (lambda: m.softmin_grad(X, 1e3)), 2000),
    ]
    for name, make, number in cases:
        print(name)
        times = {label: bench(label, make(m), number) for label, m in backends}
        if cy is not None:
            print(f"  speedup    {times['python'] / times['compiled']:10.1f}x")
    if cy is not None:
        assert abs(py.min_separation(X) - cy.min_separation(X)) < 1e-14
        assert np.allclose(py.min_separation_batch(F), cy.min_separation_batch(F), atol=1e-14)
        fp, gp = py.softmin_grad(X, 1e3)
        fc, gc = cy.softmin_grad(X, 1e3)
        assert abs(fp - fc) < 1e-12 and np.allclose(gp, gc, atol=1e-10)
        print("backends agree")


if __name__ == "__main__":
    main()
