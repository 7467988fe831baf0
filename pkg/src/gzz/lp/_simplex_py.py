"""NumPy revised-simplex kernel.

Same contract as the compiled ``_simplex_ext`` module; used when the
extension is not built or ``GZZ_BACKEND=python`` is set.

State (``basis``, ``binv``, ``xb``) is updated in place.
"""

import numpy as np
from scipy.linalg import lu_factor, lu_solve

OPTIMAL = 0
UNBOUNDED = 1
ITERATION_LIMIT = 2
SINGULAR = 3

TIE_REL = 1e-12
DEGENERATE_STEP = 1e-13


def invert_basis(A, basis, binv, pivot_tol):
    """Refactorize ``A[:, basis]`` into ``binv``. False if the basis is singular."""
    B = A[:, basis]
    m = B.shape[0]
    if m == 0:
        return True
    lu, piv = lu_factor(B, check_finite=False)
    if np.min(np.abs(np.diag(lu))) < pivot_tol:
        return False
    binv[:, :] = lu_solve((lu, piv), np.eye(m), check_finite=False)
    return True


def run_simplex(A, b, c, basis, binv, xb, eligible, tol, pivot_tol,
                max_iter, refactor_every, bland_after):
    """Iterate primal simplex from a feasible basis. Returns ``(status, iterations)``."""
    m, ncols = A.shape
    is_basic = np.zeros(ncols, dtype=bool)
    is_basic[basis] = True
    elig = eligible.astype(bool)
    degenerate_run = 0
    bland = False
    since_refactor = 0

    for it in range(max_iter):
        y = c[basis] @ binv
        d = c - y @ A
        cand = elig & ~is_basic & (d < -tol)
        if not cand.any():
            return OPTIMAL, it
        if bland:
            q = int(np.flatnonzero(cand)[0])
        else:
            q = int(np.argmin(np.where(cand, d, np.inf)))

        col = binv @ A[:, q]
        pos = col > pivot_tol
        if not pos.any():
            return UNBOUNDED, it
        xpos = np.maximum(xb, 0.0)
        ratios = np.full(m, np.inf)
        ratios[pos] = xpos[pos] / col[pos]
        theta = ratios.min()
        rows = np.flatnonzero(ratios <= theta + TIE_REL * (1.0 + theta))
        if bland:
            r = int(rows[np.argmin(basis[rows])])
        else:
            r = int(rows[np.argmax(col[rows])])
        theta = xpos[r] / col[r]

        xb -= theta * col
        xb[r] = theta
        piv = binv[r] / col[r]
        binv -= np.outer(col, piv)
        binv[r] = piv
        is_basic[basis[r]] = False
        is_basic[q] = True
        basis[r] = q

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
            if not invert_basis(A, basis, binv, pivot_tol):
                return SINGULAR, it + 1
            xb[:] = binv @ b
    return ITERATION_LIMIT, max_iter
