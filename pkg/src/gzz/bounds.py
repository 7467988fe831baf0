"""Gate-time bounds, the max-l1 dual value, and the exhaustive binary scan."""

from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import TextIO

import numpy as np

from .errors import ConjectureViolation, TooLarge
from .exact import constraint_matrix, encoding_signs
from .hadamard import next_power_of_two, permuted_plan, sylvester
from .lp import DEFAULT_TOL, MAX_LEQ, StandardLP, solve
from .matrixcore import CouplingMatrix, Schedule, num_pairs, pair_indices

SCAN_LIMIT = 6
EXHAUSTIVE_L1_LIMIT = 5


def linear_factor(n: int) -> int:
    """``n`` for odd ``n``, ``n - 1`` for even ``n``."""
    return n if n % 2 else n - 1


@dataclass(frozen=True)
class BoundsReport:
    linf: float
    l1: float
    conjecture_bound: float
    achieved: float | None = None

    def as_dict(self) -> dict:
        return {"linf": self.linf, "l1": self.l1, "conjecture_bound": self.conjecture_bound,
                "achieved": self.achieved}


def bounds(M: CouplingMatrix, achieved: float | None = None) -> BoundsReport:
    """Trivial lower bound, entrywise upper bound and conjectured linear bound on the optimal time."""
    linf = M.linf
    return BoundsReport(linf, M.l1, linf * linear_factor(M.n), achieved)


def constructive_upper_schedule(M: CouplingMatrix) -> Schedule:
    """One signed pair plan per nonzero entry; total time ``sum |M_ij|``."""
    n = M.n
    if n < 2:
        return Schedule(n)
    H = sylvester(next_power_of_two(n - 1))
    terms = []
    for (i, j), value in zip(zip(*pair_indices(n)), M.values):
        if value == 0:
            continue
        plan = permuted_plan(H, (int(i), int(j)), 1 if value > 0 else -1, n)
        terms.extend(plan.schedule(abs(float(value))))
    return Schedule(n, terms)


def max_l1_dual_bound(n: int, exhaustive: bool = False, tol: float = DEFAULT_TOL, *,
                      backend: str | None = None) -> float:
    """Value of ``max ||y||_1`` subject to ``V^T y <= 1``.

    By default returns ``C(n,2) / floor(n/2)``, the value of the constant
    feasible point; that is a lower bound on the maximum.  ``exhaustive``
    solves one sign-fixed LP per orthant (only for ``n <= 5``).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not exhaustive:
        return math.comb(n, 2) / (n // 2)
    if n > EXHAUSTIVE_L1_LIMIT:
        raise TooLarge(f"exhaustive mode limited to n <= {EXHAUSTIVE_L1_LIMIT}")
    VT = constraint_matrix(n).T
    P = num_pairs(n)
    best = -math.inf
    for sigma in itertools.product((1.0, -1.0), repeat=P):
        s = np.array(sigma)
        G = np.vstack([VT, -np.diag(s)])
        h = np.concatenate([np.ones(VT.shape[0]), np.zeros(P)])
        best = max(best, solve(StandardLP(s, G, h, MAX_LEQ), tol, backend=backend).objective_value)
    return best


def _bits_string(u: int, P: int) -> str:
    return "".join("-" if (u >> (P - 1 - p)) & 1 else "+" for p in range(P))


def _instance(u: int, P: int) -> np.ndarray:
    shifts = np.arange(P - 1, -1, -1)
    return 1.0 - 2.0 * ((u >> shifts) & 1)


def _rank_one_codes(n: int, sign: int) -> set[int]:
    """Instance codes of ``sign * m m^T`` over all encodings."""
    S = encoding_signs(n).astype(np.int64)
    i, j = pair_indices(n)
    V = sign * S[:, i] * S[:, j]
    P = num_pairs(n)
    weights = 1 << np.arange(P - 1, -1, -1, dtype=np.int64)
    return {int(x) for x in ((1 - V) // 2) @ weights}


@dataclass
class ScanReport:
    n: int
    count: int
    t_min: float
    t_max: float
    argmax: list[str] = field(default_factory=list)
    max_only_negative_rank_one: bool = False
    all_negative_rank_one_at_max: bool = False

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "count": self.count,
            "t_min": self.t_min,
            "t_max": self.t_max,
            "argmax_count": len(self.argmax),
            "max_only_negative_rank_one": self.max_only_negative_rank_one,
            "all_negative_rank_one_at_max": self.all_negative_rank_one_at_max,
        }


def _solve_chunk(codes: range, n: int, tol: float, backend: str | None) -> list[float]:
    G = np.ascontiguousarray(constraint_matrix(n).T)
    h = np.ones(G.shape[0])
    P = num_pairs(n)
    return [solve(StandardLP(_instance(u, P), G, h, MAX_LEQ), tol, backend=backend).objective_value
            for u in codes]


def conjecture_scan(n: int, *, force: bool = False, threads: int = 1, out: TextIO | None = None,
                    tol: float = DEFAULT_TOL, backend: str | None = None,
                    chunk: int = 256) -> ScanReport:
    """Optimal time of every ``+-1`` upper triangle via the dual LP.

    Rows ``upper_triangle_bits,t_star`` are streamed to ``out`` in bit-string
    order.  Raises ConjectureViolation if some value exceeds the linear
    bound.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if n > SCAN_LIMIT and not force:
        raise TooLarge(f"scan over 2^{num_pairs(n)} instances; pass force=True")
    P = num_pairs(n)
    total = 1 << P
    bound = float(linear_factor(n))
    chunks = [range(a, min(a + chunk, total)) for a in range(0, total, chunk)]
    writer = None
    if out is not None:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["upper_triangle_bits", "t_star"])

    values = np.empty(total)
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        results = (pool.map(_solve_chunk, chunks, itertools.repeat(n), itertools.repeat(tol),
                            itertools.repeat(backend))
                   if pool else (_solve_chunk(c, n, tol, backend) for c in chunks))
        for codes, vals in zip(chunks, results):
            for u, t in zip(codes, vals):
                values[u] = t
                if t > bound + tol * (1.0 + bound):
                    raise ConjectureViolation(CouplingMatrix(n, _instance(u, P)), t, bound)
                if writer is not None:
                    writer.writerow([_bits_string(u, P), f"{t:.9f}"])
    finally:
        if pool:
            pool.shutdown(wait=True, cancel_futures=True)

    t_max = float(values.max())
    at_max = np.flatnonzero(values >= t_max - tol * (1.0 + t_max))
    neg = _rank_one_codes(n, -1)
    max_set = {int(u) for u in at_max}
    return ScanReport(
        n=n,
        count=total,
        t_min=float(values.min()),
        t_max=t_max,
        argmax=[_bits_string(u, P) for u in sorted(max_set)],
        max_only_negative_rank_one=max_set <= neg,
        all_negative_rank_one_at_max=neg <= max_set,
    )


def scan_to_csv(n: int, **kwargs) -> tuple[ScanReport, str]:
    buf = io.StringIO()
    report = conjecture_scan(n, out=buf, **kwargs)
    return report, buf.getvalue()
