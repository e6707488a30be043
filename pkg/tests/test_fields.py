from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from genbound import QQ, UsageError, embedding, extension_of, make_extension, prime_field
from genbound.fields import is_irreducible

EXT = [(2, 2), (2, 3), (3, 2), (5, 2), (2, 4), (7, 3)]


def test_prime_field_has_linear_modulus():
    F = make_extension(2, 1)
    assert F.q == 2 and F.modulus == (0, 1)


@pytest.mark.parametrize("p,m,modulus", [(2, 2, (1, 1, 1)), (3, 2, (1, 0, 1)), (5, 3, (1, 1, 0, 1))])
def test_smallest_irreducible_modulus(p, m, modulus):
    assert make_extension(p, m).modulus == modulus


def _smallest_irreducible(p, m):
    # brute force: monic, coefficient vectors in lexicographic order of (c_{m-1}, ..., c_0)
    import itertools
    for high in itertools.product(range(p), repeat=m):
        coeffs = tuple(reversed(high)) + (1,)
        roots = [x for x in range(p) if sum(c * x ** i for i, c in enumerate(coeffs)) % p == 0]
        if m <= 3 and not roots:
            return coeffs


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_modulus_matches_root_scan(p, m):
    assert make_extension(p, m).modulus == _smallest_irreducible(p, m)


def test_reducible_polynomials_detected():
    assert not is_irreducible((1, 0, 1), 2)      # x^2 + 1 = (x + 1)^2
    assert is_irreducible((1, 1, 1), 2)
    assert not is_irreducible((0, 0, 1), 5)


@pytest.mark.parametrize("p,m", [(4, 1), (6, 2), (2, 0), (2, 9), (1, 1)])
def test_bad_parameters_rejected(p, m):
    with pytest.raises(UsageError):
        make_extension(p, m)


def test_sizes_reported_exactly():
    assert make_extension(3, 4).q == 81
    assert make_extension(2, 8).q == 256


@pytest.mark.parametrize("p,m", EXT)
@given(data=st.data())
def test_extension_field_axioms(p, m, data):
    F = make_extension(p, m)
    a, b, c = (np.array(data.draw(st.lists(st.integers(0, F.q - 1), min_size=8, max_size=8))) for _ in range(3))
    assert np.array_equal(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)))
    assert np.array_equal(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)))
    frob = lambda x: F.power(x, p)
    assert np.array_equal(frob(F.add(a, b)), F.add(frob(a), frob(b)))
    assert np.array_equal(F.add(a, F.neg(a)), np.zeros_like(a))


@pytest.mark.parametrize("p,m", EXT + [(101, 1), (2, 1)])
def test_inverses(p, m):
    F = make_extension(p, m)
    x = F.elements()[1:]
    assert np.all(F.mul(x, F.inv(x)) == 1)


def test_frobenius_has_order_m():
    F = make_extension(3, 4)
    x = F.elements()
    y = x
    for _ in range(4):
        y = F.power(y, 3)
    assert np.array_equal(x, y)


@pytest.mark.parametrize("small,big", [((2, 1), (2, 4)), ((2, 2), (2, 4)), ((3, 1), (3, 2)), ((5, 1), (5, 3))])
def test_embedding_is_a_ring_map(small, big):
    K, L = make_extension(*small), make_extension(*big)
    e = embedding(K, L)
    x = K.elements()
    a, b = np.meshgrid(x, x)
    assert np.array_equal(e[K.mul(a, b)], L.mul(e[a], e[b]))
    assert np.array_equal(e[K.add(a, b)], L.add(e[a], e[b]))
    assert len(set(e.tolist())) == K.q


def test_embedding_requires_divisibility():
    with pytest.raises(UsageError):
        embedding(make_extension(2, 2), make_extension(2, 3))
    assert extension_of(make_extension(2, 2), 2).q == 16


def test_prime_field_reduces_rationals():
    F = prime_field(5)
    assert F.asarray([Fraction(1, 2), -1, "3/4"]).tolist() == [3, 4, 2]
    with pytest.raises(UsageError):
        F.asarray([0.5])


def test_large_prime_matmul_is_exact():
    F = prime_field(2_147_483_629)
    rng = np.random.default_rng(1)
    a, b = F.random(rng, (3, 4)), F.random(rng, (4, 2))
    ref = np.array([[sum(int(a[i, k]) * int(b[k, j]) for k in range(4)) % F.p for j in range(2)] for i in range(3)])
    assert np.array_equal(F.matmul(a, b), ref)


def test_rationals_are_exact():
    a = QQ.asarray(["1/3", 2])
    b = QQ.asarray(["2/3", "-1/2"])
    assert QQ.add(a, b).tolist() == [Fraction(1), Fraction(3, 2)]
    assert QQ.mul(a, QQ.inv(a)).tolist() == [1, 1]
    with pytest.raises(UsageError):
        QQ.asarray([0.1])
