"""Two-phase revised simplex driver.

Problems come in two senses:

* ``min_eq``:  minimize ``c^T x`` subject to ``A x = b``, ``x >= 0``.
* ``max_leq``: maximize ``c^T y`` subject to ``G y <= h``, ``y`` free.

The second is rewritten as ``y = y+ - y-`` plus slacks and handed to the
same core.  The pivoting loop itself lives in a swappable kernel (see
``_backend``).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionMismatch, Infeasible, NumericalFailure, Unbounded
from . import _simplex_py as _codes
from ._backend import DEFAULT_BACKEND, get_kernel

MIN_EQ = "min_eq"
MAX_LEQ = "max_leq"

DEFAULT_TOL = 1e-9
DEFAULT_PIVOT_TOL = 1e-11
REFACTOR_EVERY = 50


def _frozen(a, ndim: int) -> np.ndarray:
    arr = np.array(a, dtype=np.float64, order="C")
    if arr.ndim != ndim:
        raise DimensionMismatch(f"expected {ndim}-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("LP data must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class StandardLP:
    objective: np.ndarray
    constraint_matrix: np.ndarray
    rhs: np.ndarray
    sense: str = MIN_EQ

    def __post_init__(self):
        c = _frozen(self.objective, 1)
        A = _frozen(self.constraint_matrix, 2)
        b = _frozen(self.rhs, 1)
        if self.sense not in (MIN_EQ, MAX_LEQ):
            raise ValueError(f"unknown sense {self.sense!r}")
        if A.shape != (b.size, c.size):
            raise DimensionMismatch(
                f"constraint matrix {A.shape} vs {b.size} rows and {c.size} variables"
            )
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "constraint_matrix", A)
        object.__setattr__(self, "rhs", b)


@dataclass(frozen=True)
class LPSolution:
    """Optimal vertex.

    For ``min_eq`` problems ``dual`` holds row prices ``y`` with
    ``A^T y <= c``.  For ``max_leq`` problems ``primal`` is ``y`` and
    ``dual`` the nonnegative row multipliers ``u`` with ``G^T u = c``.
    ``basis`` indexes columns of the internal standard form.
    """

    primal: np.ndarray
    objective_value: float
    basis: np.ndarray
    status: str = "optimal"
    dual: np.ndarray = field(default_factory=lambda: np.zeros(0))
    iterations: int = 0
    backend: str = DEFAULT_BACKEND

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.primal)


def _check_status(status: int, phase: str) -> None:
    if status == _codes.SINGULAR:
        raise NumericalFailure(f"{phase}: basis became singular (pivot below tolerance)")
    if status == _codes.ITERATION_LIMIT:
        raise NumericalFailure(f"{phase}: iteration limit reached")


def _pivot_in(A, basis, binv, xb, r: int, q: int) -> None:
    col = binv @ A[:, q]
    theta = xb[r] / col[r]
    xb -= theta * col
    xb[r] = theta
    piv = binv[r] / col[r]
    binv -= np.outer(col, piv)
    binv[r] = piv
    basis[r] = q


def _solve_equality(A, b, c, *, kernel, tol, pivot_tol, refactor_every, max_iter,
                    start_basis=None):
    """Core solve of min c^T x, A x = b, x >= 0. Returns (x, y, basis, iterations)."""
    m, N = A.shape
    sign = np.where(b < 0, -1.0, 1.0)
    As = np.ascontiguousarray(A * sign[:, None])
    bs = b * sign
    scale = 1.0 + float(np.max(np.abs(bs), initial=0.0))
    if max_iter is None:
        max_iter = 50 * (m + N) + 1000
    iterations = 0

    if start_basis is not None:
        A1 = As
        basis = np.array(start_basis, dtype=np.int_)
        binv = np.empty((m, m))
        if not kernel.invert_basis(A1, basis, binv, pivot_tol):
            raise NumericalFailure("starting basis is singular")
        xb = binv @ bs
        if np.min(xb, initial=0.0) < -tol * scale:
            raise ValueError("starting basis is not primal feasible")
        n_struct = N
    else:
        # phase 1 on [A | I] with artificial costs
        A1 = np.ascontiguousarray(np.hstack([As, np.eye(m)]))
        c1 = np.concatenate([np.zeros(N), np.ones(m)])
        basis = np.arange(N, N + m, dtype=np.int_)
        binv = np.eye(m)
        xb = bs.copy()
        elig = np.ones(N + m, dtype=np.uint8)
        status, it = kernel.run_simplex(A1, bs, c1, basis, binv, xb, elig, tol, pivot_tol,
                                        max_iter, refactor_every, 3 * (N + m))
        iterations += it
        _check_status(status, "phase 1")
        if status == _codes.UNBOUNDED:
            raise NumericalFailure("phase 1 reported unbounded")
        if not kernel.invert_basis(A1, basis, binv, pivot_tol):
            raise NumericalFailure("phase 1 basis singular on refactorization")
        xb = binv @ bs
        infeas = float(np.sum(xb[basis >= N]))
        if infeas > tol * scale:
            raise Infeasible(f"phase 1 optimum {infeas:.3e} exceeds tolerance")
        # drive artificial variables out of the basis where possible
        for r in range(m):
            if basis[r] < N:
                continue
            row = binv[r] @ As
            row[basis[basis < N]] = 0.0
            q = int(np.argmax(np.abs(row)))
            if abs(row[q]) > pivot_tol:
                _pivot_in(A1, basis, binv, xb, r, q)
        if not kernel.invert_basis(A1, basis, binv, pivot_tol):
            raise NumericalFailure("basis singular after removing artificials")
        xb = binv @ bs
        n_struct = N

    cost = np.zeros(A1.shape[1])
    cost[:N] = c
    elig = np.zeros(A1.shape[1], dtype=np.uint8)
    elig[:n_struct] = 1
    status, it = kernel.run_simplex(A1, bs, cost, basis, binv, xb, elig, tol, pivot_tol,
                                    max_iter, refactor_every, 3 * A1.shape[1])
    iterations += it
    _check_status(status, "phase 2")
    if status == _codes.UNBOUNDED:
        raise Unbounded("objective unbounded below")
    if not kernel.invert_basis(A1, basis, binv, pivot_tol):
        raise NumericalFailure("final basis singular on refactorization")
    xb = binv @ bs
    if np.min(xb, initial=0.0) < -tol * scale:
        raise NumericalFailure(f"final iterate infeasible (min {np.min(xb):.3e})")
    xb = np.maximum(xb, 0.0)
    x_full = np.zeros(A1.shape[1])
    x_full[basis] = xb
    x = x_full[:N]
    resid = float(np.max(np.abs(As @ x - bs), initial=0.0))
    if resid > tol * scale:
        raise NumericalFailure(f"feasibility residual {resid:.3e} above tolerance")
    y = (cost[basis] @ binv) * sign
    return x, y, basis.copy(), iterations


def solve(lp: StandardLP, tol: float = DEFAULT_TOL, pivot_tol: float = DEFAULT_PIVOT_TOL, *,
          backend: str | None = None, refactor_every: int = REFACTOR_EVERY,
          max_iter: int | None = None) -> LPSolution:
    """Solve ``lp`` to an optimal vertex.

    Raises Infeasible, Unbounded or NumericalFailure.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    name = backend or DEFAULT_BACKEND
    kernel = get_kernel(name)
    opts = dict(kernel=kernel, tol=tol, pivot_tol=pivot_tol, refactor_every=refactor_every,
                max_iter=max_iter)

    if lp.sense == MIN_EQ:
        x, y, basis, its = _solve_equality(lp.constraint_matrix, lp.rhs, lp.objective, **opts)
        return LPSolution(x, float(lp.objective @ x), basis, "optimal", y, its, name)

    G, h, c = lp.constraint_matrix, lp.rhs, lp.objective
    k, p = G.shape
    A = np.hstack([G, -G, np.eye(k)])
    cost = np.concatenate([-c, c, np.zeros(k)])
    start = np.arange(2 * p, 2 * p + k) if np.all(h >= 0) else None
    x, u, basis, its = _solve_equality(A, h, cost, start_basis=start, **opts)
    yv = x[:p] - x[p:2 * p]
    return LPSolution(yv, float(c @ yv), basis, "optimal", -u, its, name)


def verify_certificate(primal: LPSolution | float, dual_y, V, v, tol: float = DEFAULT_TOL,
                       cost=None) -> bool:
    """Strong-duality check for ``min cost^T x, V x = v, x >= 0`` (cost defaults to ones).

    True iff ``V^T y <= cost + tol`` and ``|v^T y - value| <= tol (1 + |value|)``.
    """
    value = primal.objective_value if isinstance(primal, LPSolution) else float(primal)
    y = np.asarray(dual_y, dtype=float)
    V = np.asarray(V, dtype=float)
    c = np.ones(V.shape[1]) if cost is None else np.asarray(cost, dtype=float)
    if y.shape != (V.shape[0],):
        return False
    if np.any(V.T @ y > c + tol):
        return False
    return abs(float(np.asarray(v, dtype=float) @ y) - value) <= tol * (1.0 + abs(value))
