# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: Sturm counts, bisection, inverse iteration, Charlier
recurrence.  Mirrors `_core_py`; the package selects whichever imports."""

import numpy as np

from libc.math cimport fabs, sqrt, sin, isnan, isinf, INFINITY

cdef double _SAFMIN = 2.2250738585072014e-308
cdef double _EPS = 2.220446049250313e-16


cdef int _sturm_count(double[::1] d, double[::1] e, double x, double pivmin) nogil:
    cdef Py_ssize_t n = d.shape[0]
    cdef double q = d[0] - x
    cdef int count = 1 if q < 0.0 else 0
    cdef Py_ssize_t i
    for i in range(1, n):
        if fabs(q) <= pivmin:
            q = -pivmin
        q = d[i] - x - e[i - 1] * e[i - 1] / q
        if q < 0.0:
            count += 1
    return count


def sturm_count(d, e, double x, double pivmin):
    """Number of eigenvalues of the symmetric tridiagonal (d, e) below x."""
    cdef double[::1] dv = np.ascontiguousarray(d, dtype=np.float64)
    cdef double[::1] ev = np.ascontiguousarray(e, dtype=np.float64)
    return _sturm_count(dv, ev, x, pivmin)


def default_pivmin(e):
    cdef double[::1] ev = np.ascontiguousarray(e, dtype=np.float64)
    cdef double emax = 0.0
    cdef Py_ssize_t i
    for i in range(ev.shape[0]):
        if ev[i] * ev[i] > emax:
            emax = ev[i] * ev[i]
    if emax < 1.0:
        emax = 1.0
    return _SAFMIN * emax


def gershgorin_bounds(d, e):
    cdef double[::1] dv = np.ascontiguousarray(d, dtype=np.float64)
    cdef double[::1] ev = np.ascontiguousarray(e, dtype=np.float64)
    cdef Py_ssize_t n = dv.shape[0]
    cdef double lo = INFINITY
    cdef double hi = -INFINITY
    cdef double r
    cdef Py_ssize_t i
    for i in range(n):
        r = 0.0
        if i > 0:
            r += fabs(ev[i - 1])
        if i < n - 1:
            r += fabs(ev[i])
        if dv[i] - r < lo:
            lo = dv[i] - r
        if dv[i] + r > hi:
            hi = dv[i] + r
    cdef double width = hi - lo
    if width < 1.0:
        width = 1.0
    return lo - 1e-12 * width, hi + 1e-12 * width


def eigenvalues_by_index(d, e, Py_ssize_t i_lo, Py_ssize_t i_hi, double tol, int max_iter):
    """Eigenvalues of index i_lo..i_hi (ascending, 0-based) by Sturm bisection."""
    cdef double[::1] dv = np.ascontiguousarray(d, dtype=np.float64)
    cdef double[::1] ev = np.ascontiguousarray(e, dtype=np.float64)
    cdef double pivmin = default_pivmin(e)
    glo, ghi = gershgorin_bounds(d, e)
    out = np.empty(i_hi - i_lo + 1, dtype=np.float64)
    cdef double[::1] outv = out
    cdef double prev = glo
    cdef double ghi_c = ghi
    cdef double lo, hi, mid, width, floor
    cdef Py_ssize_t j
    cdef int it
    for j in range(i_lo, i_hi + 1):
        lo = prev
        hi = ghi_c
        it = 0
        while True:
            mid = 0.5 * (lo + hi)
            width = hi - lo
            floor = 4.0 * _EPS * max(fabs(lo), fabs(hi))
            if width <= max(tol, floor):
                break
            if it >= max_iter:
                raise RuntimeError(
                    "bisection for eigenvalue %d did not reach width %g in %d iterations"
                    % (j, tol, max_iter)
                )
            if _sturm_count(dv, ev, mid, pivmin) <= j:
                lo = mid
            else:
                hi = mid
            it += 1
        outv[j - i_lo] = 0.5 * (lo + hi)
        prev = lo
    return out


def inverse_iteration(d, e, double shift, int n_iter):
    """Normalized eigenvector for the eigenvalue nearest `shift` (pivoted LU
    of the shifted tridiagonal, then inverse-power steps)."""
    cdef double[::1] d_in = np.ascontiguousarray(d, dtype=np.float64)
    cdef double[::1] e_in = np.ascontiguousarray(e, dtype=np.float64)
    cdef Py_ssize_t n = d_in.shape[0]
    # pivot floor at eps * matrix scale (see _core_py.inverse_iteration)
    cdef double scale = 0.0
    cdef double tmp
    cdef Py_ssize_t ii
    for ii in range(n):
        tmp = fabs(d_in[ii] - shift)
        if tmp > scale:
            scale = tmp
    tmp = 0.0
    for ii in range(n - 1):
        if fabs(e_in[ii]) > tmp:
            tmp = fabs(e_in[ii])
    scale += 2.0 * tmp
    if scale < 1.0:
        scale = 1.0
    cdef double pivmin = _EPS * scale

    dd_a = np.empty(n, dtype=np.float64)
    du_a = np.empty(max(n - 1, 0), dtype=np.float64)
    dl_a = np.empty(max(n - 1, 0), dtype=np.float64)
    du2_a = np.zeros(max(n - 2, 0), dtype=np.float64)
    sw_a = np.zeros(max(n - 1, 0), dtype=np.uint8)
    cdef double[::1] dd = dd_a
    cdef double[::1] du = du_a
    cdef double[::1] dl = dl_a
    cdef double[::1] du2 = du2_a
    cdef unsigned char[::1] sw = sw_a

    cdef Py_ssize_t i
    for i in range(n):
        dd[i] = d_in[i] - shift
    for i in range(n - 1):
        du[i] = e_in[i]
        dl[i] = e_in[i]

    cdef double fact, t
    for i in range(n - 1):
        if fabs(dd[i]) < fabs(dl[i]):
            sw[i] = 1
            fact = dd[i] / dl[i]
            dd[i] = dl[i]
            t = du[i]
            du[i] = dd[i + 1]
            dd[i + 1] = t - fact * dd[i + 1]
            if i < n - 2:
                du2[i] = du[i + 1]
                du[i + 1] = -fact * du[i + 1]
        else:
            if fabs(dd[i]) <= pivmin:
                dd[i] = pivmin
            fact = dl[i] / dd[i]
            dd[i + 1] -= fact * du[i]
        dl[i] = fact
    if fabs(dd[n - 1]) <= pivmin:
        dd[n - 1] = pivmin

    v_a = np.empty(n, dtype=np.float64)
    cdef double[::1] v = v_a
    cdef double norm = 0.0
    for i in range(n):
        v[i] = 1.0 + 0.5 * sin(1.0 + <double> i)
        norm += v[i] * v[i]
    norm = sqrt(norm)
    for i in range(n):
        v[i] /= norm

    cdef int step
    cdef double big = 1e100
    cdef double renorm
    cdef Py_ssize_t jj
    for step in range(n_iter):
        for i in range(n - 1):
            if sw[i]:
                t = v[i]
                v[i] = v[i + 1]
                v[i + 1] = t
            v[i + 1] -= dl[i] * v[i]
        # back substitution with on-the-fly renormalization by the running
        # maximum: near-singular shifts amplify past the double range
        v[n - 1] /= dd[n - 1]
        if fabs(v[n - 1]) > big:
            renorm = fabs(v[n - 1])
            for jj in range(n):
                v[jj] /= renorm
        if n >= 2:
            v[n - 2] = (v[n - 2] - du[n - 2] * v[n - 1]) / dd[n - 2]
            if fabs(v[n - 2]) > big:
                renorm = fabs(v[n - 2])
                for jj in range(n):
                    v[jj] /= renorm
        for i in range(n - 3, -1, -1):
            v[i] = (v[i] - du[i] * v[i + 1] - du2[i] * v[i + 2]) / dd[i]
            if fabs(v[i]) > big:
                renorm = fabs(v[i])
                for jj in range(n):
                    v[jj] /= renorm
        norm = 0.0
        for i in range(n):
            norm += v[i] * v[i]
        norm = sqrt(norm)
        if norm == 0.0 or isinf(norm) or isnan(norm):
            raise RuntimeError("inverse iteration produced a degenerate vector")
        for i in range(n):
            v[i] /= norm
    return v_a


cdef double _charlier_value(Py_ssize_t n, Py_ssize_t x, double a) nogil:
    cdef Py_ssize_t deg, m
    cdef double arg, prev, cur, nxt
    if n <= x:
        deg = n
        arg = <double> x
    else:
        deg = x
        arg = <double> n
    if deg == 0:
        return 1.0
    prev = 1.0
    cur = 1.0 - arg / a
    for m in range(1, deg):
        nxt = ((m + a - arg) * cur - m * prev) / a
        prev = cur
        cur = nxt
    return cur


def charlier_value(Py_ssize_t n, Py_ssize_t x, double a):
    """Charlier C_n(x; a) at nonnegative integer x (duality-ordered recurrence)."""
    return _charlier_value(n, x, a)


def charlier_dual_sequence(Py_ssize_t n_max, Py_ssize_t x, double a):
    """Array of C_m(x; a) for m = 0..n_max at fixed nonnegative integer x."""
    out = np.empty(n_max + 1, dtype=np.float64)
    cdef double[::1] outv = out
    cdef Py_ssize_t m
    for m in range(n_max + 1):
        outv[m] = _charlier_value(m, x, a)
    return out
