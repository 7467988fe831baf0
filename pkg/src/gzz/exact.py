"""Time-optimal synthesis over the full set of canonical encodings."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import TooLarge
from .hadamard import duplicate_columns, next_power_of_two, sylvester
from .lp import DEFAULT_TOL, StandardLP, solve, verify_certificate
from .matrixcore import CouplingMatrix, Encoding, Schedule, pair_indices, vectorize

DEFAULT_CAP = 20


@dataclass(frozen=True)
class DualCertificate:
    """Dual-feasible ``y`` (``V^T y <= 1``) with ``value = <v(M), y>``, a lower bound on gate time."""

    y: np.ndarray
    value: float

    @classmethod
    def for_matrix(cls, M: CouplingMatrix, y) -> "DualCertificate":
        y = np.array(y, dtype=float) + 0.0
        y.setflags(write=False)
        return cls(y, float(vectorize(M) @ y))

    def is_feasible(self, n: int, tol: float = DEFAULT_TOL) -> bool:
        return bool(np.all(constraint_matrix(n).T @ self.y <= 1.0 + tol))


@dataclass(frozen=True)
class SynthesisResult:
    schedule: Schedule
    total_time: float
    dual_certificate: DualCertificate | None
    optimal: bool

    @property
    def encoding_cost(self) -> int:
        return self.schedule.encoding_cost


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise TooLarge(f"n={n} exceeds the enumeration cap {cap} (2^{n - 1} encodings)")


@lru_cache(maxsize=32)
def encoding_signs(n: int) -> np.ndarray:
    """``2^(n-1) x n`` int8 array of canonical encodings, lexicographic with ``+`` before ``-``."""
    if n < 1:
        raise ValueError("n must be positive")
    S = np.ones((1 << (n - 1), n), dtype=np.int8)
    for p in range(n - 1):
        # bit for position p is the (n-2-p)-th bit of the row index
        S[:, p] = 1 - 2 * ((np.arange(1 << (n - 1)) >> (n - 2 - p)) & 1)
    S.setflags(write=False)
    return S


def enumerate_encodings(n: int, cap: int = DEFAULT_CAP) -> list[Encoding]:
    _check_cap(n, cap)
    return [Encoding(tuple(int(x) for x in row)) for row in encoding_signs(n)]


@lru_cache(maxsize=16)
def _constraint_matrix(n: int) -> np.ndarray:
    S = encoding_signs(n).astype(np.float64)
    i, j = pair_indices(n)
    V = np.ascontiguousarray((S[:, i] * S[:, j]).T)
    V.setflags(write=False)
    return V


def constraint_matrix(n: int, cap: int = DEFAULT_CAP) -> np.ndarray:
    """``V``: one column ``v(m m^T)`` per canonical encoding, rows in pair order."""
    _check_cap(n, cap)
    return _constraint_matrix(n)


def solve_columns(M: CouplingMatrix, signs: np.ndarray, tol: float = DEFAULT_TOL, *,
                  certify: bool = True, backend: str | None = None) -> SynthesisResult:
    """Minimum-time decomposition of ``M`` using only the encodings in ``signs`` (rows)."""
    n = M.n
    v = vectorize(M)
    if n < 2 or not np.any(v):
        # nothing to realize; y = 0 certifies
        cert = DualCertificate.for_matrix(M, np.zeros(v.size)) if certify else None
        return SynthesisResult(Schedule(n), 0.0, cert, certify)
    S = np.asarray(signs, dtype=np.float64)
    i, j = pair_indices(n)
    V = np.ascontiguousarray((S[:, i] * S[:, j]).T)
    sol = solve(StandardLP(np.ones(V.shape[1]), V, v), tol, backend=backend)
    support = np.flatnonzero(sol.primal)
    schedule = Schedule(n, [(Encoding(tuple(int(x) for x in S[k])), float(sol.primal[k]))
                            for k in support])
    cert, optimal = None, False
    if certify:
        cert = DualCertificate.for_matrix(M, sol.dual)
        optimal = verify_certificate(sol, sol.dual, V, v, tol)
    return SynthesisResult(schedule, schedule.total_time, cert, optimal)


def synth_exact(M: CouplingMatrix, tol: float = DEFAULT_TOL, *, certify: bool = True,
                cap: int = DEFAULT_CAP, backend: str | None = None) -> SynthesisResult:
    """Solve the synthesis LP over all ``2^(n-1)`` encodings.

    ``optimal`` is set only when the dual certificate checks out, so it is
    False when ``certify`` is off.
    """
    _check_cap(M.n, cap)
    if M.n < 2:
        return SynthesisResult(Schedule(M.n), 0.0, None, True)
    return solve_columns(M, encoding_signs(M.n), tol, certify=certify, backend=backend)


def zero_coupling_schedule(n: int, total: float) -> Schedule:
    """Schedule of length ``total`` with zero net coupling (distinct Hadamard columns)."""
    if total <= 0:
        return Schedule(n)
    H = sylvester(next_power_of_two(n))
    return duplicate_columns(H, [1] * n).schedule(total)


def convex_decomposition(M: CouplingMatrix, tol: float = DEFAULT_TOL, *,
                         cap: int = DEFAULT_CAP, backend: str | None = None) -> Schedule | None:
    """Weights summing to 1 with ``sum lambda m m^T = M``, or None if ``M`` is outside ``conv(E_n)``."""
    res = synth_exact(M, tol, cap=cap, backend=backend)
    t = res.total_time
    if t > 1.0 + tol:
        return None
    if t >= 1.0:
        return res.schedule.scaled(1.0 / t) if t > 0 else res.schedule
    pad = zero_coupling_schedule(M.n, 1.0 - t)
    return Schedule(M.n, itertools.chain(res.schedule, pad))


def membership(M: CouplingMatrix, tol: float = DEFAULT_TOL, *, cap: int = DEFAULT_CAP,
               backend: str | None = None) -> bool:
    """Whether ``M`` lies in the convex hull of the rank-one sign matrices."""
    return convex_decomposition(M, tol, cap=cap, backend=backend) is not None
