import numpy as np
import pytest
from hypothesis import given, strategies as st

from genbound import QQ, Subspace, UsageError, make_extension, prime_field, rank, row_reduce, span_insert
from genbound.linalg import batched_rref, inverse, nullspace, transpose
from oracles import rank_mod_p

F2, F5 = prime_field(2), prime_field(5)


def test_identity_is_reduced():
    R, r, piv = row_reduce(F2, np.eye(2, dtype=int))
    assert np.array_equal(R, np.eye(2)) and r == 2 and piv == (0, 1)


def test_zero_matrix():
    R, r, piv = row_reduce(F5, np.zeros((3, 3), dtype=int))
    assert not R.any() and r == 0 and piv == ()


def test_rank_one_over_f2():
    R, r, _ = row_reduce(F2, [[1, 1], [1, 1]])
    assert R.tolist() == [[1, 1], [0, 0]] and r == 1


def test_entries_outside_the_field_rejected():
    with pytest.raises(UsageError):
        row_reduce(F2, [[1, 2], [0, 1]])


def test_rational_reduction():
    R, r, piv = row_reduce(QQ, QQ.asarray([[2, 4], [1, "1/2"]]))
    assert r == 2 and R.tolist() == [[1, 0], [0, 1]]


mats = st.integers(1, 5).flatmap(lambda r: st.integers(1, 5).flatmap(
    lambda c: st.lists(st.lists(st.integers(0, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


@given(mats)
def test_rref_idempotent_and_rank_matches_oracle(m):
    F = prime_field(7)
    R, r, _ = row_reduce(F, m)
    R2, r2, _ = row_reduce(F, R)
    assert np.array_equal(R, R2) and r == r2 == rank_mod_p(m, 7)


@given(mats)
def test_rank_of_transpose(m):
    F = prime_field(7)
    assert rank(F, m) == rank(F, transpose(np.array(m)))


@given(mats)
def test_rank_over_extension_field(m):
    F = make_extension(2, 3)
    a = np.array(m) % 8
    assert rank(F, a) == rank(F, a.T)


def test_batched_matches_single():
    rng = np.random.default_rng(0)
    M = F5.random(rng, (50, 4, 6))
    R, ranks = batched_rref(F5, M)
    for b in range(50):
        Rb, rb, _ = row_reduce(F5, M[b])
        assert rb == ranks[b] and np.array_equal(Rb, R[b])


def test_inverse_and_nullspace():
    a = np.array([[1, 2], [3, 4]])
    ai = inverse(F5, a)
    assert np.array_equal(F5.matmul(a, ai), np.eye(2, dtype=int))
    ns = nullspace(F5, [[1, 2, 3]])
    assert ns.shape == (2, 3) and not F5.matmul(np.array([[1, 2, 3]]), ns.T).any()
    with pytest.raises(UsageError):
        inverse(F5, [[1, 2], [2, 4]])


def test_span_insert_examples():
    empty = Subspace.zero(F2, 2)
    s1, grew = span_insert(empty, [1, 0])
    assert s1.dim == 1 and grew
    s1b, grew = span_insert(s1, [0, 0])
    assert s1b == s1 and not grew
    s2, grew = span_insert(s1, [1, 1])
    assert s2.dim == 2 and grew and s2 == Subspace.whole(F2, 2)
    with pytest.raises(UsageError):
        span_insert(s1, [1, 0, 0])


@given(st.lists(st.lists(st.integers(0, 4), min_size=4, max_size=4), min_size=1, max_size=6))
def test_span_insert_monotone(vecs):
    S = Subspace.zero(F5, 4)
    for v in vecs:
        T, grew = span_insert(S, v)
        assert T.dim >= S.dim and grew == (T.dim > S.dim)
        assert S <= T and np.array(v) in T
        S = T
    for row in S.basis:
        assert not span_insert(S, row)[1]


def test_subspace_equality_is_span_equality():
    a = Subspace.span(F5, [[1, 1, 0], [0, 1, 1]])
    b = Subspace.span(F5, [[1, 2, 1], [1, 0, 4]])
    assert a == b and hash(a) == hash(b)
