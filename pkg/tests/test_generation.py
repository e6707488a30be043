import numpy as np
import pytest
from hypothesis import given, strategies as st

from genbound import (QQ, BudgetExceeded, Subspace, UsageError, base_change, closure_batch, find_sextonion,
                      generates, generates_batch, make_extension, matrix, min_generators_exhaustive,
                      min_generators_randomized, nmax, prime_field, split_etale, split_octonion,
                      subalgebra_closure, unital_gap, zero_module)
from genbound.generation import (certificate_words, closed_subspaces, index_to_tuples, is_closed)
from genbound.linalg import inverse
from oracles import closure_dim, etale_mul, identity_flat, matmul_flat, zero_mul, zorn_mul

F2, F3, F5 = prime_field(2), prime_field(3), prime_field(5)


def E(s, i, j):
    v = np.zeros(s * s, dtype=np.int64)
    v[i * s + j] = 1
    return v


def test_closure_of_off_diagonal_units():
    res = subalgebra_closure(matrix(2, F2), [E(2, 0, 1), E(2, 1, 0)])
    assert res.dim == 4 and res.generates and res.witness_depth >= 1


@pytest.mark.parametrize("n", [1, 2, 4])
def test_module_basis_generates(n):
    res = subalgebra_closure(zero_module(n, F3), np.eye(n, dtype=np.int64))
    assert res.dim == n and res.generates


def test_nonunital_idempotent():
    res = subalgebra_closure(matrix(2, F2, unital=False), [E(2, 0, 0)])
    assert res.dim == 1 and not res.generates
    assert not generates(matrix(2, F2), [E(2, 0, 0)])


def test_etale_examples():
    A = split_etale(2, F2, unital=False)
    assert not generates(A, [[1, 0]])
    assert generates(A, [[1, 0], [0, 1]])
    assert generates(split_etale(4, QQ), [[3, -1, 0, "1/2"]])
    assert not generates(split_etale(4, QQ), [[3, -1, 3, "1/2"]])


def test_field_mismatch_rejected():
    with pytest.raises(UsageError):
        subalgebra_closure(matrix(2, F2), [[0, 2, 0, 0]])
    with pytest.raises(UsageError):
        subalgebra_closure(matrix(2, F2), [[0, 1, 0]])


def test_exhaustive_minimum():
    assert min_generators_exhaustive(zero_module(2, F2), 3)[0] == 2
    r, w = min_generators_exhaustive(matrix(2, F2), 2)
    assert r == 2 and generates(matrix(2, F2), w)
    r, w = min_generators_exhaustive(split_etale(1, F2), 1)
    assert r == 0 and w.shape == (0, 1)
    assert min_generators_exhaustive(split_etale(1, F2, unital=False), 1)[0] == 1


def test_exhaustive_refuses_over_budget():
    with pytest.raises(BudgetExceeded) as exc:
        min_generators_exhaustive(matrix(3, F5), 3, budget=10**6)
    assert "requires about" in str(exc.value)


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("GENBOUND_BUDGET", "100")
    with pytest.raises(BudgetExceeded):
        min_generators_exhaustive(matrix(2, F2), 2)


def test_randomized_estimates():
    res = min_generators_randomized(matrix(3, QQ), 3, seed=0)
    assert res.r_estimate == 2 and res.status == "probabilistic"
    assert generates(matrix(3, QQ), res.witness)
    # one matrix spans a commutative subalgebra, so r = 1 can never work
    assert not generates(matrix(3, QQ), res.witness[:1])
    oc = min_generators_randomized(split_octonion(QQ), 4, seed=0)
    assert oc.r_estimate is not None and oc.r_estimate <= 3
    assert min_generators_randomized(zero_module(3, QQ), 4).r_estimate == 3
    with pytest.raises(UsageError):
        min_generators_randomized(matrix(2, F2), 2)


def test_nmax_exhaustive_matrix2():
    A = matrix(2, F2)
    res = nmax(A, "exhaustive_subspaces")
    assert res.value == 3 and res.status == "exact_over_this_field"
    assert res.certificate.dim == 3 and is_closed(A, res.certificate)
    borels = closed_subspaces(A, 3)
    upper = Subspace.span(F2, [E(2, 0, 0), E(2, 0, 1), E(2, 1, 1)], 4)
    # one Borel subalgebra per line of F_2^2
    assert len(borels) == 3 and upper in borels and res.certificate in borels


def test_nmax_formulas():
    assert nmax(split_octonion(F3)).value == 6
    assert nmax(zero_module(4, F3)).value == 3
    assert nmax(matrix(3, F3)).value == 7
    assert nmax(split_etale(3, F3)).value == 2
    anon = zero_module(2, F2)
    object.__setattr__(anon, "metadata", {})
    with pytest.raises(UsageError):
        nmax(anon)


def test_nmax_exhaustive_octonion_small():
    res = nmax(split_octonion(F2), "exhaustive_subspaces")
    assert res.value == 6


@pytest.mark.parametrize("field,seed", [(QQ, 0), (QQ, 7), (F5, 0), (make_extension(3, 2), 1)])
def test_find_sextonion(field, seed):
    A = split_octonion(field)
    basis, gens = find_sextonion(seed, field)
    assert basis.dim == 6 and is_closed(A, basis) and basis != Subspace.whole(field, 8)
    res = subalgebra_closure(A, gens)
    assert len(gens) == 3 and res.basis == basis


def test_find_sextonion_needs_q_at_least_3():
    with pytest.raises(UsageError):
        find_sextonion(0, F2)


def test_unital_gap():
    assert unital_gap(matrix(2, F2), [E(2, 0, 1), E(2, 1, 0)]) == (True, True)
    assert unital_gap(split_etale(1, F2), np.zeros((0, 1), dtype=np.int64)) == (True, False)
    with pytest.raises(UsageError):
        unital_gap(zero_module(2, F2), [[1, 0]])


def test_certificate_words():
    assert certificate_words(3, 7) == [(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)]
    assert len(certificate_words(2, 8)) == 8


@pytest.mark.parametrize("alg,r", [(matrix(2, F2), 2), (split_etale(2, F2), 2), (split_octonion(F2), 2)])
def test_fast_path_agrees_with_full_closure(alg, r):
    total = alg.field.q ** (r * alg.n)
    idx = np.arange(total) if total <= 1 << 16 else np.random.default_rng(0).integers(0, total, 1 << 14)
    T = index_to_tuples(alg.field, idx, r, alg.n)
    assert np.array_equal(generates_batch(alg, T), closure_batch(alg, T)[1] == alg.n)


def test_fast_path_on_octonion_triples():
    A = split_octonion(prime_field(3))
    T = A.field.random(np.random.default_rng(2), (4000, 3, 8))
    assert np.array_equal(generates_batch(A, T), closure_batch(A, T)[1] == 8)


ORACLES = {
    "matrix2": (lambda F: matrix(2, F), lambda p: (matmul_flat(2, p), identity_flat(2))),
    "matrix3": (lambda F: matrix(3, F), lambda p: (matmul_flat(3, p), identity_flat(3))),
    "octonion": (split_octonion, lambda p: (zorn_mul(p), [1, 0, 0, 0, 0, 0, 0, 1])),
    "etale3": (lambda F: split_etale(3, F), lambda p: (etale_mul(p), [1, 1, 1])),
    "module3": (lambda F: zero_module(3, F), lambda p: (zero_mul, None)),
}


@pytest.mark.parametrize("name", sorted(ORACLES))
@given(seed=st.integers(0, 10**6), r=st.integers(0, 3), p=st.sampled_from([2, 3, 5]))
def test_closure_matches_oracle(name, seed, r, p):
    build, orc = ORACLES[name]
    A = build(prime_field(p))
    mul, unit = orc(p)
    rng = np.random.default_rng(seed)
    T = A.field.random(rng, (r, A.n))
    if rng.random() < 0.5 and r:            # bias towards degenerate tuples
        T[:, rng.integers(0, A.n, A.n // 2)] = 0
    assert subalgebra_closure(A, T).dim == closure_dim(mul, T.tolist(), p, unit=unit)


@given(seed=st.integers(0, 10**6))
def test_closure_idempotent_and_monotone(seed):
    rng = np.random.default_rng(seed)
    for A in (matrix(2, F3), split_octonion(F3), split_etale(3, F3, unital=False)):
        T = A.field.random(rng, (2, A.n))
        T[:, : A.n // 2] *= int(rng.integers(0, 2))
        res = subalgebra_closure(A, T)
        again = subalgebra_closure(A, res.basis.basis)
        assert again.basis == res.basis
        extra = np.concatenate([T, A.field.random(rng, (1, A.n))])
        assert subalgebra_closure(A, extra).dim >= res.dim
        assert res.basis <= subalgebra_closure(A, extra).basis


@given(seed=st.integers(0, 10**6))
def test_conjugation_invariance(seed):
    rng = np.random.default_rng(seed)
    A, F, s = matrix(3, F2), F2, 3
    while True:
        g = F.random(rng, (s, s))
        try:
            gi = inverse(F, g)
            break
        except UsageError:
            continue
    T = F.random(rng, (2, s, s))
    T[0] = np.triu(T[0]) if rng.random() < 0.5 else T[0]
    conj = np.stack([F.matmul(F.matmul(g, t), gi) for t in T])
    assert generates(A, T) == generates(A, conj)
    assert subalgebra_closure(A, T).dim == subalgebra_closure(A, conj).dim


@pytest.mark.parametrize("build,small,big", [(lambda F: matrix(2, F), (2, 1), (2, 2)),
                                             (split_octonion, (3, 1), (3, 2)),
                                             (lambda F: split_etale(3, F), (2, 1), (2, 3))])
def test_base_change_invariance(build, small, big):
    K = make_extension(*small)
    A = build(K)
    B = base_change(A, make_extension(*big))
    rng = np.random.default_rng(0)
    for r in (1, 2):
        for _ in range(15):
            T = K.random(rng, (r, A.n))
            assert subalgebra_closure(A, T).dim == subalgebra_closure(B, T).dim


@given(seed=st.integers(0, 10**6))
def test_unital_gap_properties(seed):
    rng = np.random.default_rng(seed)
    A = matrix(2, F3)
    u = A.ops[A.op_index("unit")].tensor
    T = A.field.random(rng, (int(rng.integers(1, 3)), 4))
    gu, gn = unital_gap(A, T)
    assert gu or not gn
    if gu:
        assert generates(A.without("unit"), np.concatenate([T, u[None]]))
