import itertools
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gzz.errors import BadIndexSet, EmptyBlocks, OddN
from gzz.constructions import (BlockSpec, compose_hadamard, compose_sum, compose_tensor,
                               exclude_qubits, hamming_pair_sum, synth_blocks, synth_nn_pairs,
                               synth_subdiagonal, twisted_worst_case, worst_case_dual,
                               worst_case_primal, xor_weight_count, zero_schedule)
from gzz.exact import synth_exact
from gzz.matrixcore import CouplingMatrix, Encoding, Schedule


def test_blocks_frozen():
    spec = BlockSpec((3,), phi=2.0, c=4.0)
    S = synth_blocks(spec)
    assert S.total_time == 0.5
    assert S.coupling() == spec.target() / 4.0


@given(st.lists(st.integers(1, 4), min_size=1, max_size=5), st.sampled_from([0.5, 1.0, 3.0]))
def test_blocks_realize_target(k, phi):
    spec = BlockSpec(tuple(k), phi, 2.0)
    S = synth_blocks(spec)
    assert S.coupling().allclose(spec.target() / 2.0, 1e-12)
    assert S.total_time == pytest.approx(phi / 2.0)


def test_blocks_negative_phi():
    spec = BlockSpec((2, 1, 2), phi=-1.5)
    assert synth_blocks(spec).coupling().allclose(spec.target())
    with pytest.raises(ValueError):
        synth_blocks(BlockSpec((3,), phi=-1.0))


def test_blocks_validation():
    with pytest.raises(EmptyBlocks):
        BlockSpec(())
    with pytest.raises(ValueError):
        BlockSpec((2,), c=0)
    J = CouplingMatrix.ones(3) * 2
    assert synth_blocks(BlockSpec((2, 1), c=2.0), J).total_time == 0.5
    with pytest.raises(ValueError):
        synth_blocks(BlockSpec((2, 1), c=1.0), J)


def test_nn_pairs_frozen():
    S = synth_nn_pairs(8)
    assert S.encoding_cost == 4 and S.total_time == 1.0
    assert S.coupling() == BlockSpec((2,) * 4).target()
    with pytest.raises(OddN):
        synth_nn_pairs(7)


def test_subdiagonal_frozen():
    S = synth_subdiagonal(8)
    # 4 + 8 plan rows, the all-plus row is shared by both plans
    assert S.encoding_cost == 11 and S.total_time == 2.0
    assert synth_subdiagonal(2).total_time == 1.0


@pytest.mark.parametrize("n", [3, 4, 7, 10, 33])
def test_subdiagonal_exact(n):
    S = synth_subdiagonal(n, c=0.5, phi=1.0)
    target = CouplingMatrix.tridiagonal(n, 2.0)
    assert S.coupling_exact() == [Fraction(x) for x in target.values]
    assert S.total_time == 4.0


def test_exclude_small():
    A = CouplingMatrix(3, [1.0, -0.5, 0.25])
    S = exclude_qubits(5, A, [1, 3])
    full = S.coupling()
    assert full.restricted([0, 2, 4]).allclose(A)
    for z in (1, 3):
        assert all(full[(z, q)] == 0 for q in range(5) if q != z)
    assert S.total_time == pytest.approx(synth_exact(A).total_time)
    assert S.encoding_cost <= comb(3, 2) * 4


def test_exclude_with_hardware_coupling():
    J = CouplingMatrix(4, [2.0, 1.0, 1.0, 4.0, 1.0, 1.0])
    A = CouplingMatrix(3, [1.0, 2.0, 1.0])  # on qubits 0, 1, 2
    S = exclude_qubits(4, A, [3], J=J)
    assert J.hadamard(S.coupling()).restricted([0, 1, 2]).allclose(A)


def test_exclude_errors():
    A = CouplingMatrix.ones(3)
    with pytest.raises(BadIndexSet):
        exclude_qubits(4, A, [1, 1])
    with pytest.raises(BadIndexSet):
        exclude_qubits(4, A, [4])
    with pytest.raises(BadIndexSet):
        exclude_qubits(5, A, [0])


def test_compose_sum_and_hadamard():
    a = Schedule(3, [("+++", 1.0)])
    b = Schedule(3, [("+-+", 0.5)])
    assert compose_sum(a, b).total_time == 1.5
    assert compose_sum(a, b).coupling() == a.coupling() + b.coupling()
    h = compose_hadamard(Schedule(3, [("+-+", 1.0)]), Schedule(3, [("-++", 1.0)]))
    assert str(next(iter(h))[0]) == "--+"


def test_zero_schedule():
    Z = zero_schedule(6, 1.25)
    assert Z.total_time == pytest.approx(1.25) and np.allclose(Z.coupling().values, 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 4), st.integers(2, 4), st.integers(0, 2**32 - 1))
def test_compose_tensor(n1, n2, seed):
    rng = np.random.default_rng(seed)
    A1 = CouplingMatrix(n1, rng.uniform(-1, 1, comb(n1, 2)))
    A2 = CouplingMatrix(n2, rng.uniform(-1, 1, comb(n2, 2)))
    s1, s2 = synth_exact(A1).schedule, synth_exact(A2).schedule
    S = compose_tensor(s1, s2)
    assert S.total_time == pytest.approx(max(s1.total_time, s2.total_time))
    D = np.zeros((n1 + n2, n1 + n2))
    D[:n1, :n1] = A1.dense()
    D[n1:, n1:] = A2.dense()
    assert S.coupling().allclose(CouplingMatrix.from_dense(D), 1e-9)


@pytest.mark.parametrize("n", range(2, 9))
def test_worst_case(n):
    P, D = worst_case_primal(n), worst_case_dual(n)
    expected = n if n % 2 else n - 1
    assert P.total_time == pytest.approx(expected) and D.value == pytest.approx(expected)
    assert P.coupling().allclose(-CouplingMatrix.ones(n), 1e-12)
    assert D.is_feasible(n)


@pytest.mark.parametrize("m", ["+-+", "--++", "+-+-+", "-++-+-"])
def test_twisted_worst_case(m):
    m = Encoding.from_string(m)
    S, cert = twisted_worst_case(m, 2.0)
    M = CouplingMatrix.outer(m, -2.0)
    assert S.coupling().allclose(M, 1e-12)
    assert cert.is_feasible(m.n) and cert.value == pytest.approx(S.total_time)
    assert S.total_time == pytest.approx(synth_exact(M).total_time)


def test_twisted_zero_scale():
    S, cert = twisted_worst_case(Encoding.from_string("+-+"), 0.0)
    assert len(S) == 0 and cert.value == 0


def test_hamming_pair_sum_frozen():
    assert hamming_pair_sum([1, 0, 1, 0]) == -2
    assert hamming_pair_sum([0, 0, 0]) == 3


def test_xor_weight_count_frozen():
    assert xor_weight_count(6, 3, 0, 5) == 12
    assert xor_weight_count(4, 0, 1, 2) == 0
    with pytest.raises(ValueError):
        xor_weight_count(4, 4, 0, 1)
    with pytest.raises(ValueError):
        xor_weight_count(4, 1, 2, 2)


@given(st.lists(st.integers(0, 1), min_size=1, max_size=12))
def test_hamming_pair_sum_direct(b):
    direct = sum((-1) ** (x ^ y) for x, y in itertools.combinations(b, 2))
    assert hamming_pair_sum(b) == direct
