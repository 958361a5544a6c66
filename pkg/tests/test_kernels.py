"""Backend kernels: Sturm counts, bisection, inverse iteration.

The pure-Python module is always importable; the compiled module is skipped
gracefully when absent.  scipy's LAPACK wrappers serve as the independent
reference for random matrices.
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.linalg import eigh_tridiagonal

from sh22osc._kernels import _core_py

try:
    from sh22osc._kernels import _core
except ImportError:  # pragma: no cover - build-dependent
    _core = None

BACKENDS = [_core_py] + ([_core] if _core is not None else [])


def _random_tridiag(rng, n):
    d = rng.normal(size=n)
    e = rng.normal(size=n - 1) + 2.0
    return d, e


@pytest.mark.parametrize("backend", BACKENDS)
def test_sturm_count_matches_reference(backend):
    rng = np.random.default_rng(7)
    d, e = _random_tridiag(rng, 40)
    evals = eigh_tridiagonal(d, e, eigvals_only=True)
    pivmin = backend.default_pivmin(e)
    for x in (-5.0, -1.0, 0.0, 0.3, 2.5, 10.0):
        expected = int(np.sum(evals < x))
        assert backend.sturm_count(d, e, x, pivmin) == expected


@pytest.mark.parametrize("backend", BACKENDS)
def test_bisection_matches_lapack(backend):
    rng = np.random.default_rng(11)
    for n in (8, 33, 120):
        d, e = _random_tridiag(rng, n)
        ref = np.sort(eigh_tridiagonal(d, e, eigvals_only=True))
        got = backend.eigenvalues_by_index(d, e, 0, n - 1, 1e-13, 200)
        assert np.max(np.abs(np.asarray(got) - ref)) < 1e-11


@pytest.mark.parametrize("backend", BACKENDS)
def test_bisection_handles_clustered_pairs(backend):
    # zero-diagonal matrices pair eigenvalues +-lambda with a near-degenerate
    # central pair; index bisection must not lose either member
    n = 64
    d = np.zeros(n)
    e = np.array([1.0 if i % 2 == 0 else math.sqrt((i + 1) / 2) for i in range(n - 1)])
    got = np.asarray(backend.eigenvalues_by_index(d, e, 0, n - 1, 1e-13, 200))
    ref = np.sort(eigh_tridiagonal(d, e, eigvals_only=True))
    assert np.max(np.abs(got - ref)) < 1e-11
    assert np.max(np.abs(np.sort(-got) - got)) < 1e-11  # symmetric spectrum


@pytest.mark.parametrize("backend", BACKENDS)
def test_inverse_iteration_residual(backend):
    rng = np.random.default_rng(3)
    d, e = _random_tridiag(rng, 50)
    evals = np.sort(eigh_tridiagonal(d, e, eigvals_only=True))
    lam = float(evals[17])
    v = np.asarray(backend.inverse_iteration(d, e, lam, 4))
    assert abs(np.linalg.norm(v) - 1.0) < 1e-12
    t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    assert np.linalg.norm(t @ v - lam * v) < 1e-10


@pytest.mark.parametrize("backend", BACKENDS)
def test_charlier_value_vs_exact(backend):
    from sh22osc.polynomials import CharlierParams, charlier

    for a_ex in (Fraction(1, 4), Fraction(1), Fraction(4)):
        params = CharlierParams(a_ex)
        for n in (0, 1, 5, 17, 300):
            for x in (0, 1, 7, 12):
                exact = float(charlier(n, x, params))
                got = backend.charlier_value(n, x, float(a_ex))
                assert got == pytest.approx(exact, rel=1e-12, abs=1e-280)


@pytest.mark.skipif(_core is None, reason="compiled core not built")
def test_backends_agree_bitwise():
    # same IEEE operations in the same order: results must coincide exactly
    d = np.zeros(128)
    e = np.array([0.5 if i % 2 == 0 else math.sqrt((i + 1) / 2) for i in range(127)])
    a = _core.eigenvalues_by_index(d, e, 54, 74, 1e-13, 200)
    b = _core_py.eigenvalues_by_index(d, e, 54, 74, 1e-13, 200)
    assert np.array_equal(np.asarray(a), np.asarray(b))
    # the start vector goes through libm sin vs math.sin (1 ulp apart), so
    # the eigenvector comparison allows a few ulps
    va = np.asarray(_core.inverse_iteration(d, e, 1.0, 3))
    vb = np.asarray(_core_py.inverse_iteration(d, e, 1.0, 3))
    assert np.max(np.abs(va - vb)) < 4e-15
    for n in (0, 3, 40):
        assert _core.charlier_value(n, 9, 2.3) == _core_py.charlier_value(n, 9, 2.3)


@pytest.mark.parametrize("backend", BACKENDS)
def test_bisection_iteration_cap_raises(backend):
    d = np.zeros(16)
    e = np.ones(15)
    with pytest.raises(RuntimeError):
        backend.eigenvalues_by_index(d, e, 0, 0, 1e-13, 3)
