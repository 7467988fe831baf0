"""Coupling matrices, encodings, schedules and their JSON forms.

All pair indices are 0-based ``(i, j)`` with ``i < j`` and follow row-major
upper-triangular order ``(0,1), (0,2), ..., (0,n-1), (1,2), ...``.  The JSON
formats use 1-based qubit labels.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import DimensionMismatch, NonpositiveK, NotACutVector, SupportViolation

PRUNE_REL = 1e-12


def num_pairs(n: int) -> int:
    return n * (n - 1) // 2


@lru_cache(maxsize=None)
def pair_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Row-major upper-triangular index arrays for an ``n x n`` matrix."""
    iu = np.triu_indices(n, 1)
    iu[0].setflags(write=False)
    iu[1].setflags(write=False)
    return iu


def pair_position(n: int, i: int, j: int) -> int:
    """Position of pair ``(i, j)`` in the vectorized upper triangle."""
    if i > j:
        i, j = j, i
    if not 0 <= i < j < n:
        raise DimensionMismatch(f"pair ({i}, {j}) invalid for n={n}")
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def _n_from_length(length: int) -> int:
    n = (1 + math.isqrt(1 + 8 * length)) // 2
    if num_pairs(n) != length:
        raise DimensionMismatch(f"length {length} is not n(n-1)/2 for any n")
    return n


class CouplingMatrix:
    """Symmetric real matrix with zero diagonal, stored as its upper triangle.

    Instances are immutable; ``values`` is a read-only array.
    """

    __slots__ = ("_n", "_values")

    def __init__(self, n: int, values: Sequence[float] | np.ndarray | None = None):
        if n < 1:
            raise DimensionMismatch("need at least one qubit")
        if values is None:
            arr = np.zeros(num_pairs(n))
        else:
            arr = np.array(values, dtype=float).reshape(-1)
            if arr.size != num_pairs(n):
                raise DimensionMismatch(
                    f"expected {num_pairs(n)} upper-triangular values for n={n}, got {arr.size}"
                )
        if not np.all(np.isfinite(arr)):
            raise ValueError("coupling entries must be finite")
        arr.setflags(write=False)
        self._n = n
        self._values = arr

    # construction helpers
    @classmethod
    def from_dense(cls, matrix, *, atol: float = 0.0) -> "CouplingMatrix":
        a = np.asarray(matrix, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
        if np.max(np.abs(a - a.T), initial=0.0) > atol:
            raise ValueError("matrix is not symmetric")
        if np.max(np.abs(np.diag(a)), initial=0.0) > atol:
            raise ValueError("matrix has a nonzero diagonal")
        n = a.shape[0]
        return cls(n, a[pair_indices(n)])

    @classmethod
    def zeros(cls, n: int) -> "CouplingMatrix":
        return cls(n)

    @classmethod
    def ones(cls, n: int) -> "CouplingMatrix":
        """The all-ones coupling ``E_n``."""
        return cls(n, np.ones(num_pairs(n)))

    @classmethod
    def basis(cls, n: int, i: int, j: int) -> "CouplingMatrix":
        v = np.zeros(num_pairs(n))
        v[pair_position(n, i, j)] = 1.0
        return cls(n, v)

    @classmethod
    def from_pairs(cls, n: int, entries: Mapping[tuple[int, int], float]) -> "CouplingMatrix":
        v = np.zeros(num_pairs(n))
        for (i, j), value in entries.items():
            v[pair_position(n, i, j)] = value
        return cls(n, v)

    @classmethod
    def outer(cls, m: "Encoding | Sequence[int]", scale: float = 1.0) -> "CouplingMatrix":
        """``scale * m m^T`` with the diagonal removed."""
        enc = m if isinstance(m, Encoding) else Encoding(tuple(m))
        return cls(enc.n, scale * outer_column(enc))

    @classmethod
    def tridiagonal(cls, n: int, value: float = 1.0) -> "CouplingMatrix":
        return cls.from_pairs(n, {(i, i + 1): value for i in range(n - 1)})

    # accessors
    @property
    def n(self) -> int:
        return self._n

    @property
    def values(self) -> np.ndarray:
        return self._values

    def dense(self) -> np.ndarray:
        a = np.zeros((self._n, self._n))
        iu = pair_indices(self._n)
        a[iu] = self._values
        a[iu[1], iu[0]] = self._values
        return a

    def __getitem__(self, pair: tuple[int, int]) -> float:
        i, j = pair
        if i == j:
            return 0.0
        return float(self._values[pair_position(self._n, i, j)])

    def nonzero_pairs(self) -> list[tuple[int, int]]:
        iu = pair_indices(self._n)
        idx = np.flatnonzero(self._values)
        return [(int(iu[0][k]), int(iu[1][k])) for k in idx]

    @property
    def linf(self) -> float:
        return float(np.max(np.abs(self._values), initial=0.0))

    @property
    def l1(self) -> float:
        return math.fsum(np.abs(self._values))

    # algebra
    def _check_same(self, other: "CouplingMatrix") -> None:
        if not isinstance(other, CouplingMatrix):
            raise TypeError(f"expected CouplingMatrix, got {type(other).__name__}")
        if other.n != self._n:
            raise DimensionMismatch(f"n={self._n} vs n={other.n}")

    def __add__(self, other: "CouplingMatrix") -> "CouplingMatrix":
        self._check_same(other)
        return CouplingMatrix(self._n, self._values + other.values)

    def __sub__(self, other: "CouplingMatrix") -> "CouplingMatrix":
        self._check_same(other)
        return CouplingMatrix(self._n, self._values - other.values)

    def __neg__(self) -> "CouplingMatrix":
        return CouplingMatrix(self._n, -self._values)

    def __mul__(self, scalar: float) -> "CouplingMatrix":
        return CouplingMatrix(self._n, self._values * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> "CouplingMatrix":
        return CouplingMatrix(self._n, self._values / float(scalar))

    def hadamard(self, other: "CouplingMatrix") -> "CouplingMatrix":
        """Entrywise product."""
        self._check_same(other)
        return CouplingMatrix(self._n, self._values * other.values)

    def permuted(self, perm: Sequence[int]) -> "CouplingMatrix":
        """Relabel qubits so that new qubit ``k`` is old qubit ``perm[k]``."""
        p = list(perm)
        if sorted(p) != list(range(self._n)):
            raise ValueError("not a permutation")
        a = self.dense()[np.ix_(p, p)]
        return CouplingMatrix.from_dense(a)

    def restricted(self, qubits: Sequence[int]) -> "CouplingMatrix":
        q = list(qubits)
        return CouplingMatrix.from_dense(self.dense()[np.ix_(q, q)])

    def embedded(self, total: int, qubits: Sequence[int]) -> "CouplingMatrix":
        """Place this matrix on ``qubits`` of a ``total``-qubit register, zeros elsewhere."""
        q = list(qubits)
        if len(q) != self._n:
            raise DimensionMismatch("qubit list length must equal n")
        big = np.zeros((total, total))
        big[np.ix_(q, q)] = self.dense()
        return CouplingMatrix.from_dense(big)

    def allclose(self, other: "CouplingMatrix", atol: float = 1e-9) -> bool:
        self._check_same(other)
        return bool(np.max(np.abs(self._values - other.values), initial=0.0) <= atol)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CouplingMatrix):
            return NotImplemented
        return self._n == other.n and bool(np.array_equal(self._values, other.values))

    def __hash__(self) -> int:
        return hash((self._n, self._values.tobytes()))

    def __repr__(self) -> str:
        return f"CouplingMatrix(n={self._n}, values={self._values.tolist()!r})"


def quotient(A: CouplingMatrix, J: CouplingMatrix) -> CouplingMatrix:
    """Entrywise ``A / J`` on the support of ``J``.

    Raises SupportViolation for the first pair where ``A`` is nonzero but
    ``J`` vanishes.
    """
    if A.n != J.n:
        raise DimensionMismatch(f"A has n={A.n}, J has n={J.n}")
    a, j = A.values, J.values
    bad = np.flatnonzero((a != 0) & (j == 0))
    if bad.size:
        iu = pair_indices(A.n)
        k = bad[0]
        raise SupportViolation(int(iu[0][k]), int(iu[1][k]))
    out = np.zeros_like(a)
    mask = j != 0
    out[mask] = a[mask] / j[mask]
    return CouplingMatrix(A.n, out)


def vectorize(M: CouplingMatrix) -> np.ndarray:
    return M.values.copy()


def unvectorize(v: Sequence[float] | np.ndarray, n: int | None = None) -> CouplingMatrix:
    arr = np.asarray(v, dtype=float).reshape(-1)
    if n is None:
        n = _n_from_length(arr.size)
    return CouplingMatrix(n, arr)


@dataclass(frozen=True)
class Encoding:
    """A vector of signs; conjugating by X on the ``-1`` qubits flips their couplings."""

    signs: tuple[int, ...]

    def __post_init__(self):
        s = tuple(int(x) for x in self.signs)
        if not s:
            raise DimensionMismatch("empty encoding")
        if any(x not in (1, -1) for x in s):
            raise ValueError(f"encoding entries must be +1 or -1, got {self.signs!r}")
        object.__setattr__(self, "signs", s)

    @classmethod
    def from_string(cls, text: str) -> "Encoding":
        table = {"+": 1, "-": -1, "−": -1}
        try:
            return cls(tuple(table[c] for c in text.strip()))
        except KeyError as exc:
            raise ValueError(f"bad encoding string {text!r}") from exc

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "Encoding":
        return cls(tuple(1 - 2 * (int(b) & 1) for b in bits))

    @classmethod
    def ones(cls, n: int) -> "Encoding":
        return cls((1,) * n)

    @property
    def n(self) -> int:
        return len(self.signs)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((1 - s) // 2 for s in self.signs)

    @property
    def weight(self) -> int:
        """Number of flipped qubits (Hamming weight of the bit form)."""
        return sum(1 for s in self.signs if s < 0)

    @property
    def is_canonical(self) -> bool:
        return self.signs[-1] == 1

    def canonical(self) -> "Encoding":
        if self.signs[-1] == 1:
            return self
        return Encoding(tuple(-s for s in self.signs))

    def __neg__(self) -> "Encoding":
        return Encoding(tuple(-s for s in self.signs))

    def __mul__(self, other: "Encoding") -> "Encoding":
        if other.n != self.n:
            raise DimensionMismatch("encodings of different length")
        return Encoding(tuple(a * b for a, b in zip(self.signs, other.signs)))

    def concat(self, other: "Encoding") -> "Encoding":
        return Encoding(self.signs + other.signs)

    def as_array(self) -> np.ndarray:
        return np.array(self.signs, dtype=np.int64)

    def __str__(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.signs)


def outer_column(m: Encoding | Sequence[int]) -> np.ndarray:
    """Vectorized upper triangle of ``m m^T`` (entries ``m_i m_j``)."""
    s = m.as_array() if isinstance(m, Encoding) else np.asarray(m, dtype=np.int64)
    iu = pair_indices(s.size)
    return (s[iu[0]] * s[iu[1]]).astype(float)


def encoding_to_cut(m: Encoding) -> np.ndarray:
    """Characteristic vector ``(1 - m_i m_j) / 2`` of the cut induced by ``m``."""
    s = m.as_array()
    iu = pair_indices(m.n)
    return ((1 - s[iu[0]] * s[iu[1]]) // 2).astype(np.int8)


def cut_to_encoding(chi: Sequence[int] | np.ndarray, n: int | None = None) -> Encoding:
    """Inverse of :func:`encoding_to_cut`, returning the canonical encoding."""
    c = np.asarray(chi).reshape(-1)
    if n is None:
        n = _n_from_length(c.size)
    elif c.size != num_pairs(n):
        raise DimensionMismatch(f"cut vector of length {c.size} for n={n}")
    if not np.all((c == 0) | (c == 1)):
        raise NotACutVector("entries must be 0 or 1")
    signs = [1] * n
    for i in range(n - 1):
        signs[i] = -1 if c[pair_position(n, i, n - 1)] else 1
    m = Encoding(tuple(signs))
    if not np.array_equal(encoding_to_cut(m), c.astype(np.int8)):
        raise NotACutVector("vector is not induced by any bipartition")
    return m


def membership_reduction(M: CouplingMatrix, K: float) -> CouplingMatrix:
    """Scale ``M`` by ``1/K``: time ``<= K`` for ``M`` iff ``M/K`` lies in conv of the outer products."""
    if not K > 0:
        raise NonpositiveK(f"K must be positive, got {K!r}")
    return M / K


class Schedule:
    """Durations assigned to canonical encodings.

    Duplicate encodings (up to global sign) are merged on construction, and
    durations below ``1e-12 * total_time`` are dropped.
    """

    __slots__ = ("_n", "_terms", "_total")

    def __init__(self, n: int, terms: Iterable[tuple[Encoding | str | Sequence[int], float]] = (),
                 *, prune: bool = True):
        if n < 1:
            raise DimensionMismatch("need at least one qubit")
        merged: dict[Encoding, float] = {}
        for m, lam in terms:
            if isinstance(m, str):
                enc = Encoding.from_string(m)
            elif isinstance(m, Encoding):
                enc = m
            else:
                enc = Encoding(tuple(m))
            if enc.n != n:
                raise DimensionMismatch(f"encoding {enc} has length {enc.n}, expected {n}")
            lam = float(lam)
            if not math.isfinite(lam) or lam < 0:
                raise ValueError(f"durations must be finite and nonnegative, got {lam!r}")
            enc = enc.canonical()
            merged[enc] = merged.get(enc, 0.0) + lam
        total = math.fsum(merged.values())
        if prune:
            cut = PRUNE_REL * total
            merged = {m: lam for m, lam in merged.items() if lam > 0 and lam >= cut}
            total = math.fsum(merged.values())
        self._n = n
        self._terms = MappingProxyType(merged)
        self._total = total

    @property
    def n(self) -> int:
        return self._n

    @property
    def terms(self) -> Mapping[Encoding, float]:
        return self._terms

    @property
    def total_time(self) -> float:
        return self._total

    @property
    def encoding_cost(self) -> int:
        return len(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[tuple[Encoding, float]]:
        return iter(self._terms.items())

    def signs(self) -> np.ndarray:
        """Encodings as rows of an integer matrix, in term order."""
        if not self._terms:
            return np.zeros((0, self._n), dtype=np.int64)
        return np.array([m.signs for m in self._terms], dtype=np.int64)

    def durations(self) -> np.ndarray:
        return np.fromiter(self._terms.values(), dtype=float, count=len(self._terms))

    def coupling(self) -> CouplingMatrix:
        """``sum_m lambda_m m m^T`` (the quotient matrix this schedule realizes)."""
        if not self._terms:
            return CouplingMatrix(self._n)
        s = self.signs()
        iu = pair_indices(self._n)
        cols = s[:, iu[0]] * s[:, iu[1]]
        return CouplingMatrix(self._n, self.durations() @ cols)

    def coupling_exact(self) -> list[Fraction]:
        """Exact rational upper triangle of the realized coupling (durations read as exact binary fractions)."""
        iu = pair_indices(self._n)
        out = [Fraction(0)] * num_pairs(self._n)
        for m, lam in self._terms.items():
            f = Fraction(lam)
            s = m.signs
            for p, (i, j) in enumerate(zip(iu[0], iu[1])):
                out[p] += f if s[i] == s[j] else -f
        return out

    def scaled(self, factor: float) -> "Schedule":
        if factor < 0:
            raise ValueError("scale factor must be nonnegative")
        return Schedule(self._n, ((m, lam * factor) for m, lam in self._terms.items()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Schedule):
            return NotImplemented
        return self._n == other.n and dict(self._terms) == dict(other.terms)

    def __repr__(self) -> str:
        return f"Schedule(n={self._n}, terms={len(self._terms)}, total_time={self._total!r})"


# JSON forms


def matrix_to_json(M: CouplingMatrix) -> dict:
    iu = pair_indices(M.n)
    entries = [
        [int(iu[0][k]) + 1, int(iu[1][k]) + 1, float(M.values[k])]
        for k in np.flatnonzero(M.values)
    ]
    return {"n": M.n, "entries": entries}


def matrix_from_json(data: Mapping) -> CouplingMatrix:
    n = int(data["n"])
    v = np.zeros(num_pairs(n))
    for item in data.get("entries", []):
        i, j, value = int(item[0]), int(item[1]), float(item[2])
        if i == j or not (1 <= i <= n and 1 <= j <= n):
            raise DimensionMismatch(f"bad pair ({i}, {j}) for n={n}")
        v[pair_position(n, i - 1, j - 1)] = value
    return CouplingMatrix(n, v)


def schedule_to_json(S: Schedule) -> dict:
    return {
        "n": S.n,
        "terms": [{"m": str(m), "lambda": lam} for m, lam in S.terms.items()],
        "total_time": S.total_time,
    }


def schedule_from_json(data: Mapping) -> Schedule:
    n = int(data["n"])
    terms = []
    for item in data.get("terms", []):
        text = item["m"]
        if len(text) != n:
            raise DimensionMismatch(f"encoding {text!r} does not have length {n}")
        terms.append((Encoding.from_string(text), float(item["lambda"])))
    S = Schedule(n, terms)
    stored = data.get("total_time")
    if stored is not None and not math.isclose(float(stored), S.total_time, rel_tol=1e-12, abs_tol=1e-300):
        raise ValueError(f"total_time {stored!r} disagrees with durations (sum {S.total_time!r})")
    return S


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2) + "\n"


def write_matrix(path, M: CouplingMatrix) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(matrix_to_json(M)))


def read_matrix(path) -> CouplingMatrix:
    with open(path, encoding="utf-8") as fh:
        return matrix_from_json(json.load(fh))


def write_schedule(path, S: Schedule) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(schedule_to_json(S)))


def read_schedule(path) -> Schedule:
    with open(path, encoding="utf-8") as fh:
        return schedule_from_json(json.load(fh))
