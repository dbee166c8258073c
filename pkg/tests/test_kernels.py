import os
import subprocess
import sys

import numpy as np
import pytest

from sphere12 import _kernels_py as py
from sphere12 import kernels
from sphere12.geometry import unit

compiled = pytest.importorskip("sphere12._kernels")


def test_backend_name():
    assert kernels.BACKEND in ("compiled", "python")


def test_pure_override():
    env = dict(os.environ, SPHERE12_PURE="1")
    r = subprocess.run([sys.executable, "-c", "import sphere12; print(sphere12.BACKEND)"],
                       capture_output=True, text=True, env=env, check=True)
    assert r.stdout.strip() == "python"


@pytest.mark.parametrize("n", [2, 5, 12, 30])
def test_backends_agree(n):
    rng = np.random.default_rng(n)
    X = unit(rng.normal(size=(n, 3)))
    assert compiled.min_separation(X) == pytest.approx(py.min_separation(X), abs=1e-13)
    F = unit(rng.normal(size=(40, n, 3)))
    assert np.allclose(compiled.min_separation_batch(F), py.min_separation_batch(F), atol=1e-13)
    for beta in (10.0, 1e4):
        va, ga = compiled.softmin_grad(X, beta)
        vb, gb = py.softmin_grad(X, beta)
        assert va == pytest.approx(vb, rel=1e-10, abs=1e-12)
        assert np.allclose(ga, gb, rtol=1e-8, atol=1e-10)


def test_softmin_gradient_matches_finite_differences():
    rng = np.random.default_rng(3)
    X = unit(rng.normal(size=(6, 3)))
    v, g = py.softmin_grad(X, 50.0)
    h = 1e-6
    for i, k in ((0, 0), (3, 2), (5, 1)):
        Y = X.copy()
        Y[i, k] += h
        Z = X.copy()
        Z[i, k] -= h
        fd = (py.softmin_grad(Y, 50.0)[0] - py.softmin_grad(Z, 50.0)[0]) / (2 * h)
        assert g[i, k] == pytest.approx(fd, rel=1e-5, abs=1e-7)
