"""Hadamard matrices and column-duplicated plans.

A plan is a ``d x n`` sign matrix whose columns are (possibly negated)
copies of columns of a Hadamard matrix.  Its rows, used as encodings with
weight ``1/d`` each, realize the coupling ``(P^T P - d I) / d``.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import (
    BadMultiIndex,
    DimensionMismatch,
    NotPowerOfTwo,
    ReducedToPowerOfTwo,
    UnsupportedOrder,
)
from .matrixcore import CouplingMatrix, Encoding, Schedule, pair_indices

MAX_4K_ORDER = 668


def is_power_of_two(d: int) -> bool:
    return d >= 1 and d & (d - 1) == 0


def next_power_of_two(s: int) -> int:
    """``2**ceil(log2(s))`` for ``s >= 1``."""
    if s <= 1:
        return 1
    return 1 << (s - 1).bit_length()


def is_hadamard(H: np.ndarray) -> bool:
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        return False
    if not np.all(np.abs(H) == 1):
        return False
    d = H.shape[0]
    Hi = H.astype(np.int64)
    return bool(np.array_equal(Hi.T @ Hi, d * np.eye(d, dtype=np.int64)))


@lru_cache(maxsize=None)
def _sylvester(d: int) -> np.ndarray:
    H = np.ones((1, 1), dtype=np.int64)
    while H.shape[0] < d:
        H = np.block([[H, H], [H, -H]])
    H.setflags(write=False)
    return H


def sylvester(d: int) -> np.ndarray:
    """Sylvester Hadamard matrix of order ``d`` (a power of two)."""
    if not is_power_of_two(int(d)):
        raise NotPowerOfTwo(f"Sylvester order must be a power of two, got {d}")
    return _sylvester(int(d))


# finite fields for the Paley constructions


def _prime_power(q: int) -> tuple[int, int] | None:
    if q < 2:
        return None
    p = next((k for k in range(2, int(q**0.5) + 1) if q % k == 0), q)
    k, r = 0, q
    while r % p == 0:
        r //= p
        k += 1
    return (p, k) if r == 1 else None


def _poly_mod(a: list[int], mod: list[int], p: int) -> list[int]:
    a = a[:]
    dm = len(mod) - 1
    while len(a) - 1 >= dm and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        coef = a[-1] * pow(mod[-1], -1, p) % p
        shift = len(a) - 1 - dm
        for i, c in enumerate(mod):
            a[shift + i] = (a[shift + i] - coef * c) % p
        a.pop()
    return a


def _irreducible(p: int, k: int) -> list[int]:
    """Lowest monic irreducible polynomial of degree ``k`` over GF(p), low-order first."""
    for tail in itertools.product(range(p), repeat=k):
        f = list(tail) + [1]
        if f[0] == 0:
            continue
        reducible = False
        for deg in range(1, k // 2 + 1):
            for g_tail in itertools.product(range(p), repeat=deg):
                g = list(g_tail) + [1]
                r = _poly_mod(f, g, p)
                if not any(r):
                    reducible = True
                    break
            if reducible:
                break
        if not reducible:
            return f
    raise AssertionError("no irreducible polynomial found")


def _quadratic_character(q: int) -> tuple[np.ndarray, np.ndarray]:
    """Quadratic character table and subtraction table of GF(q), elements coded 0..q-1."""
    pk = _prime_power(q)
    if pk is None:
        raise UnsupportedOrder(f"{q} is not a prime power")
    p, k = pk
    digits = np.array([[(x // p**t) % p for t in range(k)] for x in range(q)], dtype=np.int64)
    weights = p ** np.arange(k)
    sub = ((digits[:, None, :] - digits[None, :, :]) % p) @ weights
    if k == 1:
        squares = {(x * x) % p for x in range(1, p)}
    else:
        mod = _irreducible(p, k)
        squares = set()
        for x in range(1, q):
            a = digits[x].tolist()
            prod = [0] * (2 * k - 1)
            for i, ai in enumerate(a):
                for j, aj in enumerate(a):
                    prod[i + j] = (prod[i + j] + ai * aj) % p
            r = _poly_mod(prod, mod, p) + [0] * k
            squares.add(int(sum(c * p**t for t, c in enumerate(r[:k]))))
    chi = np.array([0] + [1 if x in squares else -1 for x in range(1, q)], dtype=np.int64)
    return chi, sub


def _jacobsthal(q: int) -> np.ndarray:
    chi, sub = _quadratic_character(q)
    return chi[sub]


def paley_i(q: int) -> np.ndarray:
    """Order ``q + 1`` Hadamard matrix for a prime power ``q = 3 mod 4``."""
    if q % 4 != 3:
        raise UnsupportedOrder(f"Paley I needs q = 3 mod 4, got {q}")
    Q = _jacobsthal(q)
    S = np.zeros((q + 1, q + 1), dtype=np.int64)
    S[0, 1:] = 1
    S[1:, 0] = -1
    S[1:, 1:] = Q
    return S + np.eye(q + 1, dtype=np.int64)


def paley_ii(q: int) -> np.ndarray:
    """Order ``2(q + 1)`` Hadamard matrix for a prime power ``q = 1 mod 4``."""
    if q % 4 != 1:
        raise UnsupportedOrder(f"Paley II needs q = 1 mod 4, got {q}")
    Q = _jacobsthal(q)
    C = np.zeros((q + 1, q + 1), dtype=np.int64)
    C[0, 1:] = 1
    C[1:, 0] = 1
    C[1:, 1:] = Q
    a = np.array([[1, -1], [-1, -1]], dtype=np.int64)
    b = np.array([[1, 1], [1, -1]], dtype=np.int64)
    return np.kron(C, a) + np.kron(np.eye(q + 1, dtype=np.int64), b)


@lru_cache(maxsize=None)
def _construct(d: int) -> np.ndarray | None:
    if is_power_of_two(d):
        return _sylvester(d)
    if d % 4:
        return None
    if _prime_power(d - 1) and (d - 1) % 4 == 3:
        H = paley_i(d - 1)
    elif _prime_power(d // 2 - 1) and (d // 2 - 1) % 4 == 1:
        H = paley_ii(d // 2 - 1)
    elif d % 8 == 0 and (half := _construct(d // 2)) is not None:
        H = np.kron(_sylvester(2), half)
    else:
        return None
    H.setflags(write=False)
    return H


def is_constructible(d: int) -> bool:
    return 1 <= d <= MAX_4K_ORDER and _construct(d) is not None


def hadamard_4k(d: int, *, fallback: bool = True) -> np.ndarray:
    """A Hadamard matrix of order ``d`` (``d`` in {1, 2} or a multiple of 4, ``d <= 668``).

    Powers of two use the Sylvester matrix; otherwise Paley I, Paley II or a
    Sylvester doubling of a smaller constructible order.  When none applies,
    the next power of two is returned with a :class:`ReducedToPowerOfTwo`
    warning, or :class:`UnsupportedOrder` is raised if ``fallback`` is off.
    """
    d = int(d)
    if d < 1 or (d > 2 and d % 4):
        raise UnsupportedOrder(f"no Hadamard matrix of order {d}")
    if d > MAX_4K_ORDER:
        raise UnsupportedOrder(f"order {d} above supported range {MAX_4K_ORDER}")
    H = _construct(d)
    if H is not None:
        return H
    if not fallback:
        raise UnsupportedOrder(f"no implemented construction for order {d}")
    p = next_power_of_two(d)
    warnings.warn(f"order {d} not constructible; using Sylvester order {p}", ReducedToPowerOfTwo,
                  stacklevel=2)
    return _sylvester(p)


def fourk_order(s: int) -> int:
    """Smallest constructible order ``>= s`` that is 1, 2 or a multiple of 4."""
    if s <= 2:
        return max(s, 1)
    d = 4 * ((s + 3) // 4)
    while not is_constructible(d):
        d += 4
        if d > MAX_4K_ORDER:
            return next_power_of_two(s)
    return d


def order_for(s: int, generator: str = "sylvester") -> int:
    if generator == "sylvester":
        return next_power_of_two(s)
    if generator == "fourk":
        return fourk_order(s)
    raise ValueError(f"unknown generator {generator!r}")


def matrix_for(d: int, generator: str = "sylvester") -> np.ndarray:
    return sylvester(d) if generator == "sylvester" else hadamard_4k(d)


def to_text(H: np.ndarray) -> str:
    return "\n".join("".join("+" if x > 0 else "-" for x in row) for row in np.asarray(H)) + "\n"


@dataclass(frozen=True)
class HadamardPlan:
    """Columns of a Hadamard matrix laid out over ``n`` qubit positions.

    ``columns[p]`` is the base column placed at position ``p`` and
    ``signs[p]`` its sign.
    """

    matrix: np.ndarray
    columns: tuple[int, ...]
    signs: tuple[int, ...]
    multiplicities: tuple[int, ...] | None = None
    multi_index: tuple[int, ...] | None = None

    @property
    def d(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.matrix.shape[1]

    def gram(self) -> np.ndarray:
        """``P^T P - d I`` in integers."""
        P = self.matrix.astype(np.int64)
        return P.T @ P - self.d * np.eye(self.n, dtype=np.int64)

    def coupling(self) -> CouplingMatrix:
        return CouplingMatrix(self.n, self.gram()[pair_indices(self.n)] / self.d)

    def rows(self) -> list[Encoding]:
        """Rows as canonical encodings, duplicates removed, first occurrence order."""
        seen: dict[Encoding, None] = {}
        for row in self.matrix:
            seen.setdefault(Encoding(tuple(row)).canonical(), None)
        return list(seen)

    def schedule(self, weight: float = 1.0) -> Schedule:
        """Each row for ``weight / d``; realizes ``weight * coupling()``."""
        lam = weight / self.d
        return Schedule(self.n, ((Encoding(tuple(row)), lam) for row in self.matrix))


def plan_from_columns(H: np.ndarray, columns: Sequence[int], signs: Sequence[int] | None = None,
                      **meta) -> HadamardPlan:
    H = np.asarray(H)
    cols = tuple(int(c) for c in columns)
    sg = tuple(int(s) for s in signs) if signs is not None else (1,) * len(cols)
    if len(sg) != len(cols):
        raise DimensionMismatch("signs and columns differ in length")
    if cols and max(cols) >= H.shape[1]:
        raise DimensionMismatch(f"column {max(cols)} out of range for order {H.shape[1]}")
    P = H[:, list(cols)] * np.array(sg, dtype=np.int64)
    P.setflags(write=False)
    return HadamardPlan(P, cols, sg, **meta)


def duplicate_columns(H: np.ndarray, k: Sequence[int], n: int | None = None) -> HadamardPlan:
    """Repeat the ``i``-th of the first ``len(k)`` columns ``k[i]`` times, consecutively.

    The plan's Gram matrix minus ``d I`` is ``d`` times the block-diagonal
    sum of all-ones blocks of sizes ``k``.
    """
    k = tuple(int(x) for x in k)
    if n is None:
        n = sum(k)
    if sum(k) != n or any(x < 1 for x in k):
        raise DimensionMismatch(f"multiplicities {k} do not sum to n={n}")
    if len(k) > np.asarray(H).shape[1]:
        raise DimensionMismatch(f"{len(k)} blocks need more than {np.asarray(H).shape[1]} columns")
    columns = [i for i, ki in enumerate(k) for _ in range(ki)]
    return plan_from_columns(H, columns, multiplicities=k)


def permuted_plan(H: np.ndarray, r: Sequence[int], sign: int = 1, n: int | None = None) -> HadamardPlan:
    """Place base column 0 at every position of ``r``, distinct columns elsewhere.

    ``r`` is a strictly increasing 0-based multi-index.  With ``sign=-1`` the
    copy at ``r[1]`` is negated, which flips the sign of the coupling
    between ``r[0]`` and ``r[1]``.
    """
    r = tuple(int(x) for x in r)
    if n is None:
        n = np.asarray(H).shape[1] + len(r) - 1
    if len(r) < 2 or any(b <= a for a, b in zip(r, r[1:])) or r[0] < 0 or r[-1] >= n:
        raise BadMultiIndex(f"multi-index {r} must be strictly increasing within [0, {n})")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if n - len(r) + 1 > np.asarray(H).shape[1]:
        raise DimensionMismatch(f"order {np.asarray(H).shape[1]} too small for n={n}, |r|={len(r)}")
    members = set(r)
    columns, nxt = [], 1
    for p in range(n):
        if p in members:
            columns.append(0)
        else:
            columns.append(nxt)
            nxt += 1
    signs = [1] * n
    signs[r[1]] = sign
    return plan_from_columns(H, columns, signs, multi_index=r)


def sign_absorption(d: int) -> bool:
    """Whether every row of every sign-flipped pair plan on ``d`` qubits (Sylvester order ``d``)
    is, up to global sign, a row of some unflipped pair plan."""
    H = sylvester(d)
    n = d
    unflipped: set[Encoding] = set()
    for r in itertools.combinations(range(n), 2):
        unflipped.update(permuted_plan(H, r, 1, n).rows())
    return all(
        row in unflipped
        for r in itertools.combinations(range(n), 2)
        for row in permuted_plan(H, r, -1, n).rows()
    )
