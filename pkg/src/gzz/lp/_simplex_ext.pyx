# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled revised-simplex kernel.

Mirrors ``_simplex_py``: same entering/leaving rules, same status codes.
The iteration loop runs without the GIL so independent solves can share
a thread pool.
"""

import numpy as np

from libc.math cimport fabs, INFINITY

cdef enum:
    OPTIMAL = 0
    UNBOUNDED = 1
    ITERATION_LIMIT = 2
    SINGULAR = 3

cdef double TIE_REL = 1e-12
cdef double DEGENERATE_STEP = 1e-13


cdef bint _invert(const double[:, ::1] A, const long[::1] basis, double[:, ::1] binv,
                  double[:, ::1] work, double pivot_tol) noexcept nogil:
    """Gauss-Jordan with partial pivoting on [B | I]; result left in binv."""
    cdef Py_ssize_t m = basis.shape[0]
    cdef Py_ssize_t i, j, k, p
    cdef double best, v, f
    for i in range(m):
        for j in range(m):
            work[i, j] = A[i, basis[j]]
            binv[i, j] = 1.0 if i == j else 0.0
    for k in range(m):
        p = k
        best = fabs(work[k, k])
        for i in range(k + 1, m):
            v = fabs(work[i, k])
            if v > best:
                best = v
                p = i
        if best < pivot_tol:
            return False
        if p != k:
            for j in range(m):
                v = work[k, j]; work[k, j] = work[p, j]; work[p, j] = v
                v = binv[k, j]; binv[k, j] = binv[p, j]; binv[p, j] = v
        f = 1.0 / work[k, k]
        for j in range(m):
            work[k, j] *= f
            binv[k, j] *= f
        for i in range(m):
            if i == k:
                continue
            f = work[i, k]
            if f != 0.0:
                for j in range(m):
                    work[i, j] -= f * work[k, j]
                    binv[i, j] -= f * binv[k, j]
    return True


def invert_basis(A, basis, binv, double pivot_tol):
    cdef const double[:, ::1] A_v = np.ascontiguousarray(A, dtype=np.float64)
    cdef long[::1] basis_v = np.ascontiguousarray(basis, dtype=np.int_)
    cdef double[:, ::1] binv_v = binv
    cdef Py_ssize_t m = basis_v.shape[0]
    cdef double[:, ::1] work = np.empty((m, m))
    cdef bint ok
    with nogil:
        ok = _invert(A_v, basis_v, binv_v, work, pivot_tol)
    return bool(ok)


cdef void _matvec_col(const double[:, ::1] binv, const double[:, ::1] A, Py_ssize_t q,
                      double[::1] out) noexcept nogil:
    cdef Py_ssize_t m = binv.shape[0]
    cdef Py_ssize_t i, k
    cdef double s
    for i in range(m):
        s = 0.0
        for k in range(m):
            s += binv[i, k] * A[k, q]
        out[i] = s


def run_simplex(A, b, c, basis, binv, xb, eligible, double tol, double pivot_tol,
                long max_iter, long refactor_every, long bland_after):
    cdef const double[:, ::1] A_v = A
    cdef const double[::1] b_v = b
    cdef const double[::1] c_v = c
    cdef long[::1] basis_v = basis
    cdef double[:, ::1] binv_v = binv
    cdef double[::1] xb_v = xb
    cdef const unsigned char[::1] elig = eligible
    cdef Py_ssize_t m = A_v.shape[0]
    cdef Py_ssize_t ncols = A_v.shape[1]

    cdef unsigned char[::1] is_basic = np.zeros(ncols, dtype=np.uint8)
    cdef double[::1] y = np.empty(m)
    cdef double[::1] col = np.empty(m)
    cdef double[::1] piv = np.empty(m)
    cdef double[:, ::1] work = np.empty((m, m))

    cdef Py_ssize_t i, j, k, q, r
    cdef long it, degenerate_run = 0, since_refactor = 0
    cdef bint bland = False
    cdef double s, best, theta, ratio, xr, ci
    cdef int status = ITERATION_LIMIT
    cdef long iters = max_iter

    for i in range(m):
        is_basic[basis_v[i]] = 1

    with nogil:
        for it in range(max_iter):
            # duals y = c_B^T B^-1
            for j in range(m):
                y[j] = 0.0
            for i in range(m):
                ci = c_v[basis_v[i]]
                if ci != 0.0:
                    for j in range(m):
                        y[j] += ci * binv_v[i, j]
            # pricing
            q = -1
            best = -tol
            for j in range(ncols):
                if not elig[j] or is_basic[j]:
                    continue
                s = c_v[j]
                for i in range(m):
                    s -= y[i] * A_v[i, j]
                if s < -tol:
                    if bland:
                        q = j
                        break
                    if s < best:
                        best = s
                        q = j
            if q < 0:
                status = OPTIMAL
                iters = it
                break

            _matvec_col(binv_v, A_v, q, col)
            # ratio test
            theta = INFINITY
            for i in range(m):
                if col[i] > pivot_tol:
                    xr = xb_v[i] if xb_v[i] > 0.0 else 0.0
                    ratio = xr / col[i]
                    if ratio < theta:
                        theta = ratio
            if theta == INFINITY:
                status = UNBOUNDED
                iters = it
                break
            r = -1
            for i in range(m):
                if col[i] > pivot_tol:
                    xr = xb_v[i] if xb_v[i] > 0.0 else 0.0
                    ratio = xr / col[i]
                    if ratio <= theta + TIE_REL * (1.0 + theta):
                        if r < 0:
                            r = i
                        elif bland:
                            if basis_v[i] < basis_v[r]:
                                r = i
                        elif col[i] > col[r]:
                            r = i
            xr = xb_v[r] if xb_v[r] > 0.0 else 0.0
            theta = xr / col[r]

            # update iterate and inverse
            for i in range(m):
                xb_v[i] -= theta * col[i]
            xb_v[r] = theta
            for j in range(m):
                piv[j] = binv_v[r, j] / col[r]
            for i in range(m):
                if i == r:
                    continue
                s = col[i]
                if s != 0.0:
                    for j in range(m):
                        binv_v[i, j] -= s * piv[j]
            for j in range(m):
                binv_v[r, j] = piv[j]
            is_basic[basis_v[r]] = 0
            is_basic[q] = 1
            basis_v[r] = q

            if theta <= DEGENERATE_STEP:
                degenerate_run += 1
                if degenerate_run > bland_after:
                    bland = True
            else:
                degenerate_run = 0
                bland = False

            since_refactor += 1
            if since_refactor >= refactor_every:
                since_refactor = 0
                if not _invert(A_v, basis_v, binv_v, work, pivot_tol):
                    status = SINGULAR
                    iters = it + 1
                    break
                for i in range(m):
                    s = 0.0
                    for k in range(m):
                        s += binv_v[i, k] * b_v[k]
                    xb_v[i] = s
    return status, iters
