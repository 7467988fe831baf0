"""Closed-form schedules: block couplings, nearest-neighbour chains, qubit
exclusion, composition of schedules, and the explicit worst-case pair."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import BadIndexSet, DimensionMismatch, EmptyBlocks, OddN
from .exact import DualCertificate, SynthesisResult, synth_exact, zero_coupling_schedule
from .hadamard import duplicate_columns, next_power_of_two, plan_from_columns, sylvester
from .matrixcore import CouplingMatrix, Encoding, Schedule, outer_column, quotient

__all__ = [
    "BlockSpec",
    "synth_blocks",
    "synth_nn_pairs",
    "synth_subdiagonal",
    "exclude_qubits",
    "compose_sum",
    "compose_tensor",
    "compose_hadamard",
    "zero_schedule",
    "worst_case_dual",
    "worst_case_primal",
    "twisted_worst_case",
    "hamming_pair_sum",
    "xor_weight_count",
]


@dataclass(frozen=True)
class BlockSpec:
    """Target ``phi * (E_k1 + ... + E_ks)`` (direct sum) with constant hardware coupling ``c``."""

    k: tuple[int, ...]
    phi: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(int(x) for x in self.k))
        if not self.k:
            raise EmptyBlocks("at least one block is required")
        if any(x < 1 for x in self.k):
            raise ValueError(f"block sizes must be positive, got {self.k}")
        if not self.c > 0:
            raise ValueError("coupling constant c must be positive")

    @property
    def n(self) -> int:
        return sum(self.k)

    @property
    def s(self) -> int:
        return len(self.k)

    def target(self) -> CouplingMatrix:
        """``phi * direct_sum(E_ki)``."""
        D = np.zeros((self.n, self.n))
        start = 0
        for ki in self.k:
            D[start:start + ki, start:start + ki] = self.phi
            start += ki
        np.fill_diagonal(D, 0.0)
        return CouplingMatrix.from_dense(D)


def synth_blocks(spec: BlockSpec, J: CouplingMatrix | None = None) -> Schedule:
    """Block-constant coupling from one duplicated-column Sylvester plan.

    Uses ``2^ceil(log2 s)`` rows of weight ``|phi| / (c d)``; total time
    ``|phi| / c``.  A negative ``phi`` is realized by negating the second
    copy in each block, which only works for blocks of size at most 2.
    If ``J`` is given it must equal ``c`` on every pair inside a block.
    """
    if J is not None:
        if J.n != spec.n:
            raise DimensionMismatch(f"J has n={J.n}, blocks cover {spec.n}")
        inside = spec.target().values != 0 if spec.phi != 0 else np.zeros(J.values.size, bool)
        if not np.allclose(J.values[inside], spec.c, rtol=1e-12, atol=0.0):
            raise ValueError("J is not constant c on the block pairs")
    if spec.phi == 0:
        return Schedule(spec.n)
    d = next_power_of_two(spec.s)
    H = sylvester(d)
    if spec.phi > 0:
        plan = duplicate_columns(H, spec.k)
    else:
        if max(spec.k) > 2:
            raise ValueError("negative phi needs all block sizes <= 2")
        columns = [i for i, ki in enumerate(spec.k) for _ in range(ki)]
        signs = [1 if p == 0 or columns[p] != columns[p - 1] else -1 for p in range(len(columns))]
        plan = plan_from_columns(H, columns, signs, multiplicities=spec.k)
    return plan.schedule(abs(spec.phi) / spec.c)


def synth_nn_pairs(n: int, phi: float = 1.0, c: float = 1.0) -> Schedule:
    """Disjoint pairs ``(1,2), (3,4), ...`` each coupled by ``phi``; time ``phi / c``."""
    if n % 2 or n < 2:
        raise OddN(f"n must be even and positive, got {n}")
    return synth_blocks(BlockSpec((2,) * (n // 2), phi, c))


def _drop_last(S: Schedule) -> Schedule:
    return Schedule(S.n - 1, ((Encoding(m.signs[:-1]), lam) for m, lam in S))


def synth_subdiagonal(n: int, c: float = 1.0, phi: float = 1.0) -> Schedule:
    """Tridiagonal target with constant ``phi`` on the first off-diagonal.

    Two block plans cover the odd and even bonds; total time ``2 phi / c``.
    Odd ``n`` is built at ``n + 1`` and the last qubit dropped.  ``n = 2``
    is a single pair and gets the one-term schedule of time ``phi / c``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if n == 2:
        return synth_blocks(BlockSpec((2,), phi, c))
    m = n + (n % 2)
    first = synth_blocks(BlockSpec((2,) * (m // 2), phi, c))
    second = synth_blocks(BlockSpec((1,) + (2,) * (m // 2 - 1) + (1,), phi, c))
    total = compose_sum(first, second)
    return _drop_last(total) if m != n else total


def exclude_qubits(N: int, A: CouplingMatrix, Z: Sequence[int], J: CouplingMatrix | None = None,
                   inner: Callable[[CouplingMatrix], SynthesisResult | Schedule] | None = None
                   ) -> Schedule:
    """Run a synthesis on the participating qubits only and lift it to ``N`` qubits.

    ``A`` lives on the qubits not in ``Z`` (0-based, ascending order).  ``J``
    is the full ``N``-qubit hardware coupling (default all ones).  The lifted
    schedule has zero coupling on every pair touching ``Z`` and the same
    total time as ``inner`` (exact synthesis by default).
    """
    Zs = sorted({int(z) for z in Z})
    if len(Zs) != len(list(Z)) or any(z < 0 or z >= N for z in Zs):
        raise BadIndexSet(f"Z must hold distinct indices in [0, {N})")
    keep = [q for q in range(N) if q not in set(Zs)]
    if len(keep) != A.n:
        raise BadIndexSet(f"|Z| = {len(Zs)} but A covers {A.n} of {N} qubits")
    if J is not None:
        if J.n != N:
            raise DimensionMismatch(f"J has n={J.n}, expected {N}")
        M = quotient(A, J.restricted(keep))
    else:
        M = A
    res = (inner or synth_exact)(M)
    base = res.schedule if isinstance(res, SynthesisResult) else res
    s = len(Zs)
    H = sylvester(next_power_of_two(s + 1))
    col_of = {q: 0 for q in keep}
    col_of.update({z: 1 + t for t, z in enumerate(Zs)})
    mask = plan_from_columns(H, [col_of[q] for q in range(N)])
    lam_scale = 1.0 / mask.d
    terms = []
    for v in mask.matrix:
        for m, lam in base:
            ext = np.ones(N, dtype=np.int64)
            ext[keep] = m.signs
            terms.append((Encoding(tuple(int(x) for x in v * ext)), lam * lam_scale))
    return Schedule(N, terms)


def _same_n(s1: Schedule, s2: Schedule) -> None:
    if s1.n != s2.n:
        raise DimensionMismatch(f"schedules act on {s1.n} and {s2.n} qubits")


def compose_sum(s1: Schedule, s2: Schedule) -> Schedule:
    """Run both schedules back to back; couplings add."""
    _same_n(s1, s2)
    return Schedule(s1.n, itertools.chain(s1, s2))


def compose_hadamard(s1: Schedule, s2: Schedule) -> Schedule:
    """Entrywise products ``m * v`` with durations ``lambda * beta``; couplings multiply entrywise."""
    _same_n(s1, s2)
    return Schedule(s1.n, ((m * v, lam * beta) for m, lam in s1 for v, beta in s2))


def zero_schedule(n: int, total: float) -> Schedule:
    """Schedule of the given length whose net coupling vanishes."""
    return zero_coupling_schedule(n, total)


def compose_tensor(s1: Schedule, s2: Schedule) -> Schedule:
    """Schedule on ``n1 + n2`` qubits realizing the direct sum of both couplings.

    Both schedules are laid out on a common time axis of length
    ``max(t1, t2)`` (the shorter one padded with zero coupling).  Each
    overlap of a term ``m1`` with a term ``m2`` is split evenly between
    ``m1 + m2`` and ``m1 + (-m2)`` so that all cross-block couplings cancel.
    """
    n = s1.n + s2.n
    T = max(s1.total_time, s2.total_time)
    if T == 0:
        return Schedule(n)
    a = compose_sum(s1, zero_schedule(s1.n, T - s1.total_time)) if s1.total_time < T else s1
    b = compose_sum(s2, zero_schedule(s2.n, T - s2.total_time)) if s2.total_time < T else s2

    def segments(S: Schedule):
        ends = np.cumsum(S.durations())
        ends[-1] = T
        return list(S.terms), ends

    ta, ea = segments(a)
    tb, eb = segments(b)
    terms = []
    i = j = 0
    start = 0.0
    while i < len(ta) and j < len(tb):
        end = min(ea[i], eb[j])
        length = end - start
        if length > 0:
            m1, m2 = ta[i], tb[j]
            terms.append((m1.concat(m2), length / 2))
            terms.append((m1.concat(-m2), length / 2))
        start = end
        if ea[i] <= end:
            i += 1
        if eb[j] <= end:
            j += 1
    return Schedule(n, terms)


def _half(n: int) -> int:
    return n // 2


def _odd_part(n: int) -> int:
    return n if n % 2 else n - 1


def worst_case_dual(n: int) -> DualCertificate:
    """Constant dual ``y = -1/floor(n/2)`` for ``M = -E_n``; value ``n`` (odd) or ``n - 1`` (even)."""
    if n < 2:
        raise ValueError("n must be at least 2")
    y = np.full(math.comb(n, 2), -1.0 / _half(n))
    return DualCertificate.for_matrix(-CouplingMatrix.ones(n), y)


def _worst_case_support(n: int) -> list[tuple[int, ...]]:
    weights = {(n + 1) // 2, n // 2}
    out = []
    for bits in itertools.product((0, 1), repeat=n - 1):
        if sum(bits) in weights:
            out.append(bits + (0,))
    return out


def _worst_case_weight(n: int) -> float:
    k = _odd_part(n)
    return k / math.comb(k, k // 2)


def worst_case_primal(n: int) -> Schedule:
    """Uniform schedule over balanced encodings realizing ``-E_n`` in time ``n`` or ``n - 1``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    lam = _worst_case_weight(n)
    return Schedule(n, ((Encoding.from_bits(b), lam) for b in _worst_case_support(n)))


def twisted_worst_case(m: Encoding, C: float = 1.0) -> tuple[Schedule, DualCertificate]:
    """Optimal schedule and matching certificate for ``M = -C m m^T``.

    The balanced support is twisted entrywise by ``m`` and the dual is the
    constant certificate with signs following ``v(M)``.
    """
    if C < 0:
        raise ValueError("C must be nonnegative")
    m = m.canonical()
    n = m.n
    M = CouplingMatrix.outer(m, -C)
    y = -outer_column(m) / _half(n)
    cert = DualCertificate.for_matrix(M, y)
    if C == 0:
        return Schedule(n), cert
    lam = C * _worst_case_weight(n)
    S = Schedule(n, ((Encoding.from_bits(b) * m, lam) for b in _worst_case_support(n)))
    return S, cert


def hamming_pair_sum(b: Sequence[int]) -> int:
    """``sum_{i<j} (-1)^(b_i xor b_j)`` in closed form, ``C(n,2) - 2|b|(n - |b|)``."""
    b = [int(x) for x in b]
    n, w = len(b), sum(b)
    return math.comb(n, 2) - 2 * w * (n - w)


def xor_weight_count(n: int, k: int, i: int, j: int) -> int:
    """``sum over |b| = k`` of ``b_i xor b_j``, which is ``2 C(n-2, k-1)``."""
    if not 0 <= k < n:
        raise ValueError("need 0 <= k < n")
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise ValueError("need distinct i, j in [0, n)")
    return 0 if k == 0 else 2 * math.comb(n - 2, k - 1)
