"""Pure-Python implementations of the hot kernels.

Mirror of the Cython module `_core`; selected at import time when the
compiled extension is unavailable.  Same algorithms, same signatures.
"""

from __future__ import annotations

import math

import numpy as np

_SAFMIN = 2.2250738585072014e-308  # smallest normal double


def sturm_count(d, e, x: float, pivmin: float) -> int:
    """Number of eigenvalues of the symmetric tridiagonal (d, e) below x.

    Counts negative pivots of the shifted LDL^T factorization; pivots with
    magnitude under pivmin are replaced by -pivmin so the count stays
    well defined through near-singular shifts.
    """
    n = len(d)
    q = d[0] - x
    count = 1 if q < 0 else 0
    for i in range(1, n):
        if abs(q) <= pivmin:
            q = -pivmin
        q = d[i] - x - e[i - 1] * e[i - 1] / q
        if q < 0:
            count += 1
    return count


def default_pivmin(e) -> float:
    emax = 0.0
    for v in e:
        if v * v > emax:
            emax = v * v
    return _SAFMIN * max(emax, 1.0)


def gershgorin_bounds(d, e) -> tuple[float, float]:
    n = len(d)
    lo = math.inf
    hi = -math.inf
    for i in range(n):
        r = (abs(e[i - 1]) if i > 0 else 0.0) + (abs(e[i]) if i < n - 1 else 0.0)
        lo = min(lo, d[i] - r)
        hi = max(hi, d[i] + r)
    width = max(hi - lo, 1.0)
    return lo - 1e-12 * width, hi + 1e-12 * width


def eigenvalues_by_index(d, e, i_lo: int, i_hi: int, tol: float, max_iter: int):
    """Eigenvalues of index i_lo..i_hi (ascending, 0-based) by Sturm bisection.

    Each eigenvalue is bisected independently to absolute width `tol`
    (floored at a few ulps of the endpoint magnitudes); returns a float64
    array of length i_hi - i_lo + 1.  Raises RuntimeError when an interval
    fails to shrink within max_iter steps.
    """
    d = np.asarray(d, dtype=np.float64)
    e = np.asarray(e, dtype=np.float64)
    pivmin = default_pivmin(e)
    glo, ghi = gershgorin_bounds(d, e)
    out = np.empty(i_hi - i_lo + 1, dtype=np.float64)
    prev = glo
    for j in range(i_lo, i_hi + 1):
        lo, hi = prev, ghi
        it = 0
        while True:
            mid = 0.5 * (lo + hi)
            width = hi - lo
            if width <= max(tol, 4.0 * 2.220446049250313e-16 * max(abs(lo), abs(hi))):
                break
            if it >= max_iter:
                raise RuntimeError(
                    f"bisection for eigenvalue {j} did not reach width {tol} "
                    f"in {max_iter} iterations"
                )
            if sturm_count(d, e, mid, pivmin) <= j:
                lo = mid
            else:
                hi = mid
            it += 1
        out[j - i_lo] = 0.5 * (lo + hi)
        prev = lo  # eigenvalues are ordered; reuse as the next lower bound
    return out


def inverse_iteration(d, e, shift: float, n_iter: int):
    """Normalized eigenvector for the eigenvalue nearest `shift`.

    Gaussian elimination with partial pivoting on the shifted tridiagonal,
    factored once, then `n_iter` inverse-power steps from a fixed slowly
    varying start vector.  Tiny pivots are bumped to keep the solves finite;
    that is exactly the near-singular regime inverse iteration exploits.
    """
    d = np.asarray(d, dtype=np.float64)
    e = np.asarray(e, dtype=np.float64)
    n = len(d)
    # pivot floor at eps * matrix scale: an exactly singular shift then
    # produces solution growth ~1/eps, large enough for convergence in one
    # or two steps but nowhere near overflow when squared for the norm
    scale = float(np.max(np.abs(d - shift))) + 2.0 * (float(np.max(np.abs(e))) if n > 1 else 0.0)
    pivmin = 2.220446049250313e-16 * max(scale, 1.0)

    # LU bands of (T - shift I) with partial pivoting: dl holds multipliers,
    # dd the pivots, du/du2 the two superdiagonals created by row swaps
    dd = np.array(d - shift, dtype=np.float64)
    du = np.array(e, dtype=np.float64)
    dl = np.array(e, dtype=np.float64)
    du2 = np.zeros(max(n - 2, 0), dtype=np.float64)
    swapped = np.zeros(max(n - 1, 0), dtype=np.bool_)
    for i in range(n - 1):
        if abs(dd[i]) < abs(dl[i]):
            # swap rows i and i+1
            swapped[i] = True
            fact = dd[i] / dl[i]
            dd[i] = dl[i]
            t = du[i]
            du[i] = dd[i + 1]
            dd[i + 1] = t - fact * dd[i + 1]
            if i < n - 2:
                du2[i] = du[i + 1]
                du[i + 1] = -fact * du[i + 1]
        else:
            if abs(dd[i]) <= pivmin:
                dd[i] = pivmin
            fact = dl[i] / dd[i]
            dd[i + 1] -= fact * du[i]
        dl[i] = fact
    if abs(dd[n - 1]) <= pivmin:
        dd[n - 1] = pivmin

    v = np.fromiter((1.0 + 0.5 * math.sin(1.0 + i) for i in range(n)), dtype=np.float64)
    v /= math.sqrt(float(v @ v))
    big = 1e100
    for _ in range(n_iter):
        # forward substitution with the recorded row swaps (multipliers are
        # bounded by 1, so no growth control is needed here)
        for i in range(n - 1):
            if swapped[i]:
                v[i], v[i + 1] = v[i + 1], v[i]
            v[i + 1] -= dl[i] * v[i]
        # back substitution; near-singular shifts can amplify past the
        # double range, so renormalize by the running maximum on the fly
        # (scaling processed and pending entries alike preserves direction)
        v[n - 1] /= dd[n - 1]
        if abs(v[n - 1]) > big:
            v *= 1.0 / abs(v[n - 1])
        if n >= 2:
            v[n - 2] = (v[n - 2] - du[n - 2] * v[n - 1]) / dd[n - 2]
            if abs(v[n - 2]) > big:
                v *= 1.0 / abs(v[n - 2])
        for i in range(n - 3, -1, -1):
            v[i] = (v[i] - du[i] * v[i + 1] - du2[i] * v[i + 2]) / dd[i]
            if abs(v[i]) > big:
                v *= 1.0 / abs(v[i])
        norm = math.sqrt(float(v @ v))
        if norm == 0.0 or math.isinf(norm) or math.isnan(norm):
            raise RuntimeError("inverse iteration produced a degenerate vector")
        v /= norm
    return v


def charlier_value(n: int, x: int, a: float) -> float:
    """Charlier C_n(x; a) at nonnegative integer x via the duality-ordered
    three-term recurrence (degree loop runs over min(n, x))."""
    deg, arg = (n, x) if n <= x else (x, n)
    if deg == 0:
        return 1.0
    prev = 1.0
    cur = 1.0 - arg / a
    for m in range(1, deg):
        prev, cur = cur, ((m + a - arg) * cur - m * prev) / a
    return cur


def charlier_dual_sequence(n_max: int, x: int, a: float):
    """Array of C_m(x; a) for m = 0..n_max at fixed nonnegative integer x."""
    out = np.empty(n_max + 1, dtype=np.float64)
    for m in range(n_max + 1):
        out[m] = charlier_value(m, x, a)
    return out
