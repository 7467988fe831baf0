"""Polynomial-size encoding families and the restricted synthesis LP.

Level ``j`` collects, for every ``i = 2..j`` and every increasing index
tuple ``r`` of length ``i``, the rows of the plan that places one Hadamard
column at all positions of ``r`` and distinct columns elsewhere.  The
resulting LP has ``O(n^(j+1))`` columns instead of ``2^(n-1)``.

By default the pair level also takes the plans whose second copy is
negated.  Without them ``-e_ij`` can cost more than one time unit once
``n >= 5``, and the restricted optimum may exceed ``sum |M_ij|``.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from pathlib import Path

import numpy as np
from filelock import FileLock

from .errors import BadLevel, Infeasible, TooLarge
from .exact import DualCertificate, SynthesisResult, encoding_signs, solve_columns
from .hadamard import matrix_for, order_for, sign_absorption
from .lp import DEFAULT_TOL, StandardLP, solve
from .matrixcore import CouplingMatrix, Encoding, num_pairs, pair_indices

GENERATORS = ("sylvester", "fourk")
CACHE_ENV = "GZZ_CACHE_DIR"


@dataclass(frozen=True)
class RestrictedElliptope:
    n: int
    j: int
    generator: str
    signs: np.ndarray  # (count, n) int8, canonical rows in first-seen order
    signed: bool = True

    def __len__(self) -> int:
        return self.signs.shape[0]

    @property
    def encodings(self) -> list[Encoding]:
        return [Encoding(tuple(int(x) for x in row)) for row in self.signs]

    def to_text(self) -> str:
        gen = self.generator if self.signed else f"{self.generator}-unsigned"
        lines = [f"n {self.n}", f"j {self.j}", f"generator {gen}"]
        lines += ["".join("+" if x > 0 else "-" for x in row) for row in self.signs]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RestrictedElliptope":
        lines = text.splitlines()
        head = dict(line.split(None, 1) for line in lines[:3])
        n, j, gen = int(head["n"]), int(head["j"]), head["generator"].strip()
        signed = not gen.endswith("-unsigned")
        gen = gen.removesuffix("-unsigned")
        rows = [[1 if c == "+" else -1 for c in line.strip()] for line in lines[3:] if line.strip()]
        signs = np.array(rows, dtype=np.int8).reshape(len(rows), n)
        signs.setflags(write=False)
        return cls(n, j, gen, signs, signed)


def _level_rows(n: int, i: int, generator: str, signed: bool = False) -> np.ndarray:
    """Rows of all plans with ``i`` tied positions, stacked (not deduplicated).

    With ``signed`` each plan is followed by its copy with column ``r[1]`` negated.
    """
    s = n - i + 1
    H = np.asarray(matrix_for(order_for(s, generator), generator), dtype=np.int8)
    blocks = []
    for r in itertools.combinations(range(n), i):
        columns = np.empty(n, dtype=np.intp)
        members = np.zeros(n, dtype=bool)
        members[list(r)] = True
        columns[members] = 0
        columns[~members] = np.arange(1, s)
        P = H[:, columns]
        blocks.append(P)
        if signed:
            F = P.copy()
            F[:, r[1]] *= -1
            blocks.append(F)
    return np.concatenate(blocks, axis=0)


def _canonical_unique(rows: np.ndarray) -> np.ndarray:
    rows = rows * rows[:, -1:]  # last entry +1
    _, first = np.unique(rows, axis=0, return_index=True)
    return np.ascontiguousarray(rows[np.sort(first)])


@lru_cache(maxsize=64)
def _build(n: int, j: int, generator: str, signed: bool) -> RestrictedElliptope:
    if n == 2 and not signed:
        # a single pair: the one-column order cannot flip its sign
        signs = encoding_signs(2).copy()
    else:
        signs = _canonical_unique(np.concatenate([_level_rows(n, i, generator, signed and i == 2)
                                                  for i in range(2, j + 1)]))
    signs = signs.astype(np.int8)
    signs.setflags(write=False)
    return RestrictedElliptope(n, j, generator, signs, signed)


def _cache_path(cache_dir: str | os.PathLike, n: int, j: int, generator: str, signed: bool) -> Path:
    tag = "" if signed else "_unsigned"
    return Path(cache_dir) / f"restricted_n{n}_j{j}_{generator}{tag}.txt"


def build_restricted(n: int, j: int, generator: str = "sylvester",
                     cache_dir: str | os.PathLike | None = None, *,
                     signed: bool = True) -> RestrictedElliptope:
    """Deduplicated canonical encodings of level ``j`` (``2 <= j <= n``).

    ``signed=False`` gives the plain family without negated pair plans.
    With ``cache_dir`` the list is read from, or written to, a text file
    guarded by a file lock.
    """
    if generator not in GENERATORS:
        raise ValueError(f"generator must be one of {GENERATORS}")
    if not 2 <= j <= n:
        raise BadLevel(f"level j={j} must satisfy 2 <= j <= n={n}")
    if cache_dir is None:
        return _build(n, j, generator, signed)
    path = _cache_path(cache_dir, n, j, generator, signed)
    path.parent.mkdir(parents=True, exist_ok=True)
    with FileLock(str(path) + ".lock"):
        if path.exists():
            E = RestrictedElliptope.from_text(path.read_text())
            if (E.n, E.j, E.generator, E.signed) == (n, j, generator, signed):
                return E
        E = _build(n, j, generator, signed)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(E.to_text())
        tmp.replace(path)
    return E


def default_cache_dir() -> str:
    return os.environ.get(CACHE_ENV, "./.gzz-cache")


def size_bound(n: int, j: int) -> float:
    """Rough upper bound ``2 * sum_{i=2..j} n^(i+1) / i!`` on the set size."""
    return 2.0 * sum(n ** (i + 1) / factorial(i) for i in range(2, j + 1))


def _linf_certificate(M: CouplingMatrix) -> DualCertificate:
    v = M.values
    p = int(np.argmax(np.abs(v)))
    y = np.zeros(v.size)
    y[p] = np.sign(v[p])
    return DualCertificate.for_matrix(M, y)


def synth_restricted(M: CouplingMatrix, j: int = 2, generator: str = "sylvester",
                     tol: float = DEFAULT_TOL, *, backend: str | None = None,
                     cache_dir: str | os.PathLike | None = None,
                     signed: bool = True) -> SynthesisResult:
    """Minimum-time schedule over the level-``j`` encodings.

    ``optimal`` is True only when the time meets ``max |M_ij|``; the single
    entry dual vector is attached as the certificate in that case.
    """
    E = build_restricted(M.n, j, generator, cache_dir, signed=signed)
    res = solve_columns(M, E.signs, tol, certify=False, backend=backend)
    linf = M.linf
    if abs(res.total_time - linf) <= tol * (1.0 + linf):
        cert = _linf_certificate(M) if linf > 0 else DualCertificate.for_matrix(M, np.zeros(M.values.size))
        return SynthesisResult(res.schedule, res.total_time, cert, True)
    return SynthesisResult(res.schedule, res.total_time, None, False)


def spanning_check(n: int, tol: float = DEFAULT_TOL, *, backend: str | None = None,
                   signed: bool = False) -> bool:
    """Whether every ``+-e_ij`` is a nonnegative combination of level-2 encodings,
    together with the order-4 sign-absorption property.

    Checked on the plain family by default, which is the stronger statement.
    """
    if n > 8:
        raise TooLarge("spanning check supported for n <= 8")
    if n < 2:
        raise ValueError("n must be at least 2")
    S = build_restricted(n, 2, signed=signed).signs.astype(np.float64)
    i, k = pair_indices(n)
    V = np.ascontiguousarray((S[:, i] * S[:, k]).T)
    cost = np.ones(V.shape[1])
    for p in range(num_pairs(n)):
        for sgn in (1.0, -1.0):
            rhs = np.zeros(V.shape[0])
            rhs[p] = sgn
            try:
                solve(StandardLP(cost, V, rhs), tol, backend=backend)
            except Infeasible:
                return False
    return sign_absorption(4)
