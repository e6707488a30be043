"""Slow, independent reference implementations used to freeze test values.

Nothing here touches the structure-constant tensors or the batched engine:
products are written out by hand and linear algebra is plain Python mod p.
"""
from __future__ import annotations

import itertools


def rank_mod_p(rows, p):
    rows = [list(r) for r in rows]
    rk, col = 0, 0
    ncols = len(rows[0]) if rows else 0
    while rk < len(rows) and col < ncols:
        piv = next((i for i in range(rk, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            col += 1
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        inv = pow(rows[rk][col], p - 2, p)
        rows[rk] = [x * inv % p for x in rows[rk]]
        for i in range(len(rows)):
            if i != rk and rows[i][col] % p:
                f = rows[i][col]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rk])]
        rk += 1
        col += 1
    return rk


def _echelon_insert(basis, v, p):
    """Reduce v against a list of (pivot, row) pairs; append if new."""
    v = [x % p for x in v]
    for piv, row in basis:
        if v[piv]:
            f = v[piv]
            v = [(a - f * b) % p for a, b in zip(v, row)]
    nz = next((i for i, x in enumerate(v) if x), None)
    if nz is None:
        return False
    inv = pow(v[nz], p - 2, p)
    v = [x * inv % p for x in v]
    for k, (piv, row) in enumerate(basis):
        if row[nz]:
            f = row[nz]
            basis[k] = (piv, [(a - f * b) % p for a, b in zip(row, v)])
    basis.append((nz, v))
    return True


def closure_dim(mul, gens, p, unit=None, unary=()):
    """Dimension of the subalgebra generated by ``gens`` under the binary
    product ``mul`` (and optional unit / unary maps), mod prime p.  Works by
    multiplying every pair of basis vectors until nothing new appears."""
    basis = []
    todo = list(gens) + ([unit] if unit is not None else [])
    for v in todo:
        _echelon_insert(basis, v, p)
    changed = True
    while changed:
        changed = False
        rows = [row for _, row in basis]
        for a in rows:
            for f in unary:
                changed |= _echelon_insert(basis, f(a), p)
            for b in rows:
                changed |= _echelon_insert(basis, mul(a, b), p)
    return len(basis)


# hand-written products -------------------------------------------------------

def matmul_flat(s, p):
    def mul(a, b):
        return [sum(a[i * s + k] * b[k * s + j] for k in range(s)) % p for i in range(s) for j in range(s)]
    return mul


def identity_flat(s):
    return [1 if i == j else 0 for i in range(s) for j in range(s)]


def etale_mul(p):
    return lambda a, b: [x * y % p for x, y in zip(a, b)]


def zero_mul(a, b):
    return [0] * len(a)


def _cross(x, y):
    return [x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]]


def _dot(x, y):
    return sum(a * b for a, b in zip(x, y))


def zorn_mul(p):
    """Zorn vector matrices (a, v, w, b) in coordinates (a, v1..v3, w1..w3, b)."""
    def mul(x, y):
        a, v, w, b = x[0], x[1:4], x[4:7], x[7]
        a2, v2, w2, b2 = y[0], y[1:4], y[4:7], y[7]
        A = a * a2 + _dot(v, w2)
        V = [a * v2[i] + b2 * v[i] + _cross(w, w2)[i] for i in range(3)]
        W = [a2 * w[i] + b * w2[i] - _cross(v, v2)[i] for i in range(3)]
        Bv = b * b2 + _dot(w, v2)
        return [c % p for c in [A] + V + W + [Bv]]
    return mul


# F_{q^2} for prime q -----------------------------------------------------------

class Fq2:
    """Elements x + y t with t^2 = c t + d, the polynomial irreducible mod q."""

    def __init__(self, q):
        self.q = q
        for c, d in itertools.product(range(q), repeat=2):
            # t^2 - c t - d has no root in F_q
            if all((z * z - c * z - d) % q for z in range(q)):
                self.c, self.d = c, d
                break

    def elements(self):
        return list(itertools.product(range(self.q), repeat=2))

    def mul(self, u, v):
        q, c, d = self.q, self.c, self.d
        x1, y1 = u
        x2, y2 = v
        yy = y1 * y2
        return ((x1 * x2 + yy * d) % q, (x1 * y2 + x2 * y1 + yy * c) % q)

    def add(self, u, v):
        return ((u[0] + v[0]) % self.q, (u[1] + v[1]) % self.q)

    def neg(self, u):
        return ((-u[0]) % self.q, (-u[1]) % self.q)


def common_eigenline_2x2(mats, q):
    """True when the 2x2 matrices over prime F_q share an eigenline over F_{q^2}."""
    K = Fq2(q)
    zero, one = (0, 0), (1, 0)
    lines = [(one, x) for x in K.elements()] + [(zero, one)]
    lifted = [[[(m[i][j] % q, 0) for j in range(2)] for i in range(2)] for m in mats]
    for v in lines:
        ok = True
        for m in lifted:
            Av = [K.add(K.mul(m[i][0], v[0]), K.mul(m[i][1], v[1])) for i in range(2)]
            det = K.add(K.mul(v[0], Av[1]), K.neg(K.mul(v[1], Av[0])))
            if det != zero:
                ok = False
                break
        if ok:
            return True
    return False


# subspace counting -------------------------------------------------------------

def count_subspaces(n, k, p):
    """Number of k-dim subspaces of F_p^n by listing spans of k-tuples."""
    if k == 0:
        return 1
    seen = set()
    vecs = list(itertools.product(range(p), repeat=n))
    for tup in itertools.combinations(vecs, k):
        if rank_mod_p(tup, p) == k:
            seen.add(frozenset(_span(tup, p)))
    return len(seen)


def _span(vectors, p):
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(vectors)):
        out.add(tuple(sum(c * v[i] for c, v in zip(coeffs, vectors)) % p for i in range(len(vectors[0]))))
    return out


def all_tuples(q, r, n):
    return itertools.product(itertools.product(range(q), repeat=n), repeat=r)


# closed forms ------------------------------------------------------------------

def module_nongen(q, n, r):
    prod = 1
    for i in range(n):
        prod *= q ** r - q ** i
    return q ** (n * r) - prod


def etale_nongen(q, n, r, unital=True):
    prod = 1
    for i in range(n):
        prod *= q ** r - (i if unital else i + 1)
    return q ** (n * r) - max(prod, 0)
