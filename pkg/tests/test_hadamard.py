import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gzz.errors import BadMultiIndex, DimensionMismatch, NotPowerOfTwo, ReducedToPowerOfTwo, \
    UnsupportedOrder
from gzz.hadamard import (duplicate_columns, fourk_order, hadamard_4k, is_constructible, is_hadamard,
                          next_power_of_two, order_for, paley_i, paley_ii, permuted_plan,
                          sign_absorption, sylvester)


@pytest.mark.parametrize("d", [1, 2, 4, 8, 16, 32])
def test_sylvester(d):
    H = sylvester(d)
    assert is_hadamard(H) and np.all(H[0] == 1) and np.all(H[:, 0] == 1)


def test_sylvester_rejects_non_power():
    with pytest.raises(NotPowerOfTwo):
        sylvester(12)


@pytest.mark.parametrize("d", [12, 20, 24, 28, 36, 44, 52, 60, 68, 76, 100])
def test_fourk_orders(d):
    assert is_constructible(d)
    assert is_hadamard(hadamard_4k(d))


def test_paley_constructions():
    assert is_hadamard(paley_i(11)) and paley_i(11).shape == (12, 12)
    assert is_hadamard(paley_ii(5)) and paley_ii(5).shape == (12, 12)
    assert is_hadamard(paley_i(27))  # prime power field


def test_hadamard_4k_errors():
    with pytest.raises(UnsupportedOrder):
        hadamard_4k(6)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        hadamard_4k(16)


def test_unconstructible_order_fallback():
    d = next(d for d in range(4, 669, 4) if not is_constructible(d))
    with pytest.warns(ReducedToPowerOfTwo):
        H = hadamard_4k(d)
    assert H.shape[0] == next_power_of_two(d)
    with pytest.raises(UnsupportedOrder):
        hadamard_4k(d, fallback=False)


def test_orders():
    assert [next_power_of_two(s) for s in (1, 2, 3, 5, 9)] == [1, 2, 4, 8, 16]
    assert [fourk_order(s) for s in (1, 2, 3, 5, 9, 13)] == [1, 2, 4, 8, 12, 16]
    assert order_for(9, "sylvester") == 16 and order_for(9, "fourk") == 12
    with pytest.raises(ValueError):
        order_for(3, "walsh")


def test_is_hadamard_rejects():
    assert not is_hadamard(np.array([[1, 1], [1, 1]]))
    assert not is_hadamard(np.array([[1, 0], [0, 1]]))


def test_duplicate_columns_frozen():
    plan = duplicate_columns(sylvester(4), (2, 1, 2))
    assert plan.columns == (0, 0, 1, 2, 2)
    assert plan.coupling().values.tolist() == [1, 0, 0, 0, 0, 0, 0, 0, 0, 1]


@given(st.lists(st.integers(1, 3), min_size=1, max_size=5))
def test_duplicate_columns_gram(k):
    d = next_power_of_two(len(k))
    plan = duplicate_columns(sylvester(d), k)
    n = sum(k)
    blocks = np.zeros((n, n), dtype=np.int64)
    s = 0
    for ki in k:
        blocks[s:s + ki, s:s + ki] = d
        s += ki
    np.fill_diagonal(blocks, 0)
    assert np.array_equal(plan.gram(), blocks)
    assert plan.schedule().total_time == pytest.approx(1.0)


def test_duplicate_columns_errors():
    with pytest.raises(DimensionMismatch):
        duplicate_columns(sylvester(2), (1, 1, 1))
    with pytest.raises(DimensionMismatch):
        duplicate_columns(sylvester(2), (1, 1), n=3)


@pytest.mark.parametrize("r", [(0, 1), (1, 3), (0, 2, 4), (1, 2, 3, 4)])
@pytest.mark.parametrize("sign", [1, -1])
def test_permuted_plan_gram(r, sign):
    n = 5
    d = next_power_of_two(n - len(r) + 1)
    plan = permuted_plan(sylvester(d), r, sign, n)
    expect = np.zeros((n, n), dtype=np.int64)
    for a in r:
        for b in r:
            if a != b:
                ea = sign if a == r[1] else 1
                eb = sign if b == r[1] else 1
                expect[a, b] = d * ea * eb
    assert np.array_equal(plan.gram(), expect)


def test_permuted_plan_errors():
    with pytest.raises(BadMultiIndex):
        permuted_plan(sylvester(4), (2, 1), 1, 4)
    with pytest.raises(BadMultiIndex):
        permuted_plan(sylvester(4), (0,), 1, 4)
    with pytest.raises(DimensionMismatch):
        permuted_plan(sylvester(2), (0, 1), 1, 5)


def test_sign_absorption():
    assert sign_absorption(4)
