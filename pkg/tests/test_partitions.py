import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from symkit.errors import PreconditionError
from symkit.partitions import (as_partition, centralizer_sum, compositions, compositions_array, majorizes,
                               matrix_col_sums, matrix_row_sums, multinomial, normalized_majorizes,
                               partitions_by_length, partitions_of, repeated_majorizes, z_beta)


def brute_partitions(k):
    out = set()
    for length in range(k + 1):
        for t in itertools.product(range(1, k + 1), repeat=length):
            if sum(t) == k and list(t) == sorted(t, reverse=True):
                out.add(t)
    return out


def test_partitions_small():
    assert partitions_of(0) == [()]
    assert partitions_of(1) == [(1,)]
    assert len(partitions_of(5)) == 7
    assert partitions_of(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]


@pytest.mark.parametrize("k", range(0, 9))
def test_partitions_match_brute_force(k):
    got = partitions_of(k)
    assert len(got) == len(set(got))
    assert set(got) == brute_partitions(k)


def test_partition_counts_up_to_12():
    assert [len(partitions_of(k)) for k in range(13)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]


def test_partitions_by_length():
    assert partitions_by_length(3) == {1: [(3,)], 2: [(2, 1)], 3: [(1, 1, 1)]}
    assert partitions_by_length(2) == {1: [(2,)], 2: [(1, 1)]}
    groups = partitions_by_length(6)
    assert sum(len(g) for g in groups.values()) == 11
    for l, g in groups.items():
        assert all(len(b) == l for b in g)
    with pytest.raises(PreconditionError):
        partitions_by_length(0)


def test_z_beta():
    assert z_beta((1,) * 6) == 720
    assert z_beta((7,)) == 7
    assert z_beta((2, 1)) == 2
    assert z_beta((2, 2, 1)) == 8
    assert z_beta((1,) * 25) == 15511210043330985984000000


@pytest.mark.parametrize("k", range(0, 13))
def test_centralizer_identity(k):
    assert centralizer_sum(k) == Fraction(1)


def test_as_partition_canonical():
    assert as_partition([1, 0, 3, 2, 0]) == (3, 2, 1)
    with pytest.raises(PreconditionError):
        as_partition([1, -1])
    with pytest.raises(PreconditionError):
        as_partition([1.5])


@pytest.mark.parametrize("k,n", [(0, 3), (3, 1), (3, 2), (4, 3), (5, 4)])
def test_compositions(k, n):
    got = list(compositions(k, n))
    brute = sorted((t for t in itertools.product(range(k + 1), repeat=n) if sum(t) == k), reverse=True)
    assert got == brute
    arr = [tuple(r) for block in compositions_array(k, n, chunk=3) for r in block.tolist()]
    assert sorted(arr) == sorted(brute)


def test_matrix_sums_and_multinomial():
    alpha = (1, 2, 0, 3)
    assert matrix_row_sums(alpha, 2) == (3, 3)
    assert matrix_col_sums(alpha, 2) == (1, 5)
    assert multinomial(6, alpha) == 60


def test_majorizes_basic():
    assert majorizes((1, 1), (2, 0))
    assert not majorizes((2, 0), (1, 1))
    assert majorizes((1, 1), (2,))
    assert not majorizes((1, 1), (3,))


def test_normalized_majorizes_examples():
    assert normalized_majorizes((1,), (2,))
    assert normalized_majorizes((1, 1), (2,))
    for k in range(1, 6):
        assert normalized_majorizes((k, k), (k + 1, k - 1))
    assert not normalized_majorizes((2,), (1, 1))
    with pytest.raises(PreconditionError):
        normalized_majorizes((), (1,))


def test_repeated_majorizes_examples():
    assert repeated_majorizes((1, 1), (2,))
    assert repeated_majorizes((2,), (2,))
    # normalization forgets the weight, repetition does not
    assert normalized_majorizes((2,), (1,)) and not repeated_majorizes((2,), (1,))
    assert repeated_majorizes((1,), (2,))


@given(st.lists(st.integers(1, 6), min_size=1, max_size=4), st.lists(st.integers(1, 6), min_size=1, max_size=4))
def test_relations_agree_at_equal_weight(a, b):
    if sum(a) == sum(b):
        assert normalized_majorizes(a, b) == repeated_majorizes(a, b) == majorizes(a, b)


def test_relations_incomparable_across_weights():
    assert normalized_majorizes((2,), (1,)) and not repeated_majorizes((2,), (1,))
    assert repeated_majorizes((1,), (1, 1)) and not normalized_majorizes((1,), (1, 1))


vec = st.lists(st.integers(0, 5), min_size=3, max_size=3)


@given(vec)
def test_majorizes_reflexive(x):
    assert majorizes(x, x)


@given(vec, vec, vec)
def test_majorizes_transitive(x, y, z):
    if majorizes(x, y) and majorizes(y, z):
        assert majorizes(x, z)


@given(vec, vec)
def test_majorizes_antisymmetric(x, y):
    if majorizes(x, y) and majorizes(y, x):
        assert sorted(x) == sorted(y)


@given(st.lists(st.floats(0, 10), min_size=1, max_size=5))
def test_majorized_by_concentrated_vector(x):
    # every non-negative vector is majorized by putting all its mass in one coordinate
    assert majorizes(x, [sum(x)])
