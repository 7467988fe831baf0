"""Independent checks of a schedule against hardware and target couplings."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DimensionMismatch, GZZError, TooLarge
from .matrixcore import CouplingMatrix, Schedule, pair_indices, quotient

PHASE_LIMIT = 14
DEFAULT_TOL = 1e-9


def reconstruct(schedule: Schedule, J: CouplingMatrix) -> CouplingMatrix:
    """Total coupling ``J * sum_m lambda_m m m^T`` (entrywise product)."""
    if schedule.n != J.n:
        raise DimensionMismatch(f"schedule on {schedule.n} qubits, J on {J.n}")
    return J.hadamard(schedule.coupling())


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    residual: float
    tol: float
    total_time: float
    encoding_cost: int
    linf: float | None = None
    l1: float | None = None
    lower_bound_ok: bool | None = None
    upper_bound_ok: bool | None = None
    message: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


def check(schedule: Schedule, J: CouplingMatrix, A: CouplingMatrix,
          tol: float = DEFAULT_TOL) -> CheckReport:
    """Residual ``max |reconstruct(schedule, J) - A|``; passes iff it is at most ``tol``.

    Also reports where the total time sits relative to ``max |M_ij|`` and
    ``sum |M_ij|`` for the quotient ``M = A / J``.
    """
    t, cost = schedule.total_time, schedule.encoding_cost
    if not (schedule.n == J.n == A.n):
        return CheckReport(False, math.inf, tol, t, cost,
                           message=f"dimension mismatch: schedule {schedule.n}, J {J.n}, A {A.n}")
    diff = reconstruct(schedule, J).values - A.values
    residual = float(np.max(np.abs(diff), initial=0.0))
    passed = residual <= tol
    try:
        M = quotient(A, J)
    except GZZError as exc:
        return CheckReport(passed, residual, tol, t, cost, message=str(exc))
    linf, l1 = M.linf, M.l1
    return CheckReport(passed, residual, tol, t, cost, linf, l1,
                       t >= linf - tol, t <= l1 + tol,
                       "" if passed else f"residual {residual:.3e} exceeds {tol:.1e}")


def phase_vector(A: CouplingMatrix, n: int | None = None) -> np.ndarray:
    """Diagonal phases ``sum_{i<j} A_ij s_i s_j`` with ``s = (-1)^z`` for every basis string ``z``.

    Index ``z`` reads qubit 1 as its most significant bit.
    """
    n = A.n if n is None else n
    if n != A.n:
        raise DimensionMismatch(f"matrix has n={A.n}, requested {n}")
    if n > PHASE_LIMIT:
        raise TooLarge(f"phase vector limited to n <= {PHASE_LIMIT}")
    z = np.arange(1 << n)
    S = 1 - 2 * ((z[:, None] >> np.arange(n - 1, -1, -1)) & 1)
    i, j = pair_indices(n)
    return (S[:, i] * S[:, j]) @ A.values


def relative_phases(A: CouplingMatrix) -> np.ndarray:
    """Phases with the all-zeros string as reference."""
    th = phase_vector(A)
    return th - th[0]


def phase_distance(A: CouplingMatrix, B: CouplingMatrix) -> float:
    """Largest phase difference modulo ``2 pi`` after removing the global offset."""
    d = relative_phases(A) - relative_phases(B)
    wrapped = np.angle(np.exp(1j * d))
    return float(np.max(np.abs(wrapped), initial=0.0))
