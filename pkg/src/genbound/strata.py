"""Burnside strata of matrix tuples, rank strata, and the explicit slice Y.

A tuple (a_1, ..., a_r) of s x s matrices lies in X_i when the a_j share an
invariant i-dimensional subspace over the algebraic closure, and in T_2 when
some invariant subspace of dimension at least 2 carries pairwise commuting
restrictions.  Points over the closure are approximated by scanning the
extensions F_{q^m} with m up to ``max_ext_degree``.

Subspaces are RREF row bases.  W is invariant under A (acting on columns)
exactly when the rows of W A^T reduce to zero against W.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import BudgetExceeded, UsageError
from .fields import Field, embedding, extension_of, prime_field
from .generation import budget_from_env, index_to_tuples
from .grassmann import gaussian_binomial, grassmannian_blocks
from .linalg import batched_rref, rank

# rough cap on the number of field entries materialised at once
_BLOCK_ENTRIES = 1 << 21


@dataclass(frozen=True)
class StratumQuery:
    s: int
    r: int
    i: int
    max_ext_degree: int | None = None

    def __post_init__(self):
        if self.s < 2:
            raise UsageError("strata need s >= 2")
        if not (1 <= self.i <= self.s - 1):
            raise UsageError(f"i must lie in 1..{self.s - 1}, got {self.i}")
        if self.r < 0:
            raise UsageError("r must be nonnegative")
        if self.max_ext_degree is not None and self.max_ext_degree < 1:
            raise UsageError("max_ext_degree must be at least 1")

    @property
    def degree(self) -> int:
        return self.s if self.max_ext_degree is None else self.max_ext_degree


def scan_degrees(max_degree: int) -> list:
    """Extension degrees worth scanning: every m <= M divides some listed
    degree, so a subspace defined over F_{q^m} shows up over a listed field."""
    return [m for m in range(1, max_degree + 1) if 2 * m > max_degree]


def as_matrices(tup, s: int):
    """Coerce a tuple of s x s matrices given as (r, s, s) or (r, s*s)."""
    a = np.asarray(tup)
    if a.ndim == 2 and a.shape[1] == s * s:
        a = a.reshape(-1, s, s)
    if a.ndim == 2 and a.shape == (s, s):
        a = a[None]
    if a.ndim != 3 or a.shape[1:] != (s, s):
        raise UsageError(f"expected a tuple of {s}x{s} matrices, got shape {a.shape}")
    return a


def _lift(field: Field, mats, m: int):
    if m == 1:
        return field, mats
    big = extension_of(field, m)
    return big, embedding(field, big)[mats]


def _stratum_cost(q: int, s: int, dims, degrees) -> int:
    return sum(gaussian_binomial(s, k, q ** m) for k in dims for m in degrees)


def _invariant_pairs(F: Field, mats, W, piv):
    """For a batch of tuples ``mats`` (B, r, s, s) and subspaces ``W``
    (N, k, s) sharing pivot columns ``piv``, return the alive index pairs
    (b, w) with W[w] invariant under every matrix of tuple b, together with
    the coordinate matrices of the restrictions, shape (P, r, k, k)."""
    B, r = mats.shape[:2]
    N = W.shape[0]
    bb, ww = np.divmod(np.arange(B * N, dtype=np.int64), N)
    coords = []
    piv = list(piv)
    for j in range(r):
        Wp = W[ww]
        U = F.matmul(Wp, np.swapaxes(mats[bb, j], 1, 2))
        C = U[:, :, piv]
        resid = F.sub(U, F.matmul(C, Wp))
        ok = ~np.any(resid != 0, axis=(1, 2))
        bb, ww = bb[ok], ww[ok]
        coords = [c[ok] for c in coords] + [C[ok]]
        if bb.size == 0:
            break
    if r == 0:
        coords = []
    C = np.stack(coords, axis=1) if coords else F.zeros((bb.size, 0, W.shape[1], W.shape[1]))
    return bb, ww, C


def _iter_invariant(field: Field, mats, k: int, degrees):
    """Yield (ext_field, b_idx, W, coords) for invariant k-subspaces."""
    B, r, s, _ = mats.shape
    for m in degrees:
        F, lifted = _lift(field, mats, m)
        for piv, block in grassmannian_blocks(F, k, s):
            per = max(1, _BLOCK_ENTRIES // max(1, block.shape[0] * k * s))
            for lo in range(0, B, per):
                bb, ww, C = _invariant_pairs(F, lifted[lo:lo + per], block, piv)
                if bb.size:
                    yield F, bb + lo, block[ww], C


def in_X_i_batch(field: Field, tuples, i: int, max_ext_degree: int | None = None, budget=None):
    """Vectorised membership in X_i for tuples of shape (B, r, s, s)."""
    T = np.asarray(tuples, dtype=np.int64)
    if T.ndim != 4 or T.shape[2] != T.shape[3]:
        raise UsageError(f"expected a batch of matrix tuples (B, r, s, s), got {T.shape}")
    B, r, s, _ = T.shape
    q = StratumQuery(s, r, i, max_ext_degree)
    if not field.is_finite:
        raise UsageError("stratum membership is tested over finite fields")
    degrees = scan_degrees(q.degree)
    cost = _stratum_cost(field.q, s, [i], degrees)
    budget = budget_from_env(budget)
    if cost > budget:
        raise BudgetExceeded(cost, budget, "subspace tests per tuple")
    out = np.zeros(B, dtype=bool)
    for _, bb, _, _ in _iter_invariant(field, T, i, degrees):
        out[bb] = True
    return out


def in_X_i(field: Field, tup, query: StratumQuery) -> bool:
    """True iff the matrices share an invariant ``query.i``-dimensional
    subspace over some F_{q^m} with m <= ``query.max_ext_degree`` (default s)."""
    mats = as_matrices(tup, query.s)
    return bool(in_X_i_batch(field, mats[None], query.i, query.max_ext_degree)[0])


def _pairwise_commute(F: Field, C):
    """C has shape (P, r, k, k); True where all r restrictions commute."""
    P, r = C.shape[:2]
    ok = np.ones(P, dtype=bool)
    for a, b in itertools.combinations(range(r), 2):
        ab = F.matmul(C[:, a], C[:, b])
        ba = F.matmul(C[:, b], C[:, a])
        ok &= ~np.any(ab != ba, axis=(1, 2))
    return ok


def in_T2_batch(field: Field, tuples, max_ext_degree: int | None = None, budget=None):
    T = np.asarray(tuples, dtype=np.int64)
    if T.ndim != 4 or T.shape[2] != T.shape[3]:
        raise UsageError(f"expected a batch of matrix tuples (B, r, s, s), got {T.shape}")
    B, r, s, _ = T.shape
    if not field.is_finite:
        raise UsageError("stratum membership is tested over finite fields")
    if s < 2:
        raise UsageError("T_2 needs s >= 2")
    M = s if max_ext_degree is None else int(max_ext_degree)
    if M < 1:
        raise UsageError("max_ext_degree must be at least 1")
    degrees = scan_degrees(M)
    dims = range(2, s + 1)
    cost = _stratum_cost(field.q, s, dims, degrees)
    budget = budget_from_env(budget)
    if cost > budget:
        raise BudgetExceeded(cost, budget, "subspace tests per tuple")
    out = np.zeros(B, dtype=bool)
    for k in dims:
        for F, bb, _, C in _iter_invariant(field, T, k, degrees):
            out[bb[_pairwise_commute(F, C)]] = True
    return out


def in_T2(field: Field, tup, max_ext_degree: int | None = None, s: int | None = None) -> bool:
    """True iff some invariant subspace W with dim W >= 2, defined over an
    extension of degree <= ``max_ext_degree``, has pairwise commuting
    restrictions.  W = F^s itself is included."""
    a = np.asarray(tup)
    if s is None:
        s = a.shape[-1] if a.ndim == 3 else int(round(a.shape[-1] ** 0.5))
    mats = as_matrices(a, s)
    return bool(in_T2_batch(field, mats[None], max_ext_degree)[0])


# ----------------------------------------------------------------------------
# incidence and rank strata

@dataclass(frozen=True)
class IncidenceCount:
    formula: int
    enumerated: int | None

    @property
    def agree(self) -> bool | None:
        return None if self.enumerated is None else self.formula == self.enumerated


def count_Y_incidence(field: Field, s: int, r: int, i: int, budget=None) -> IncidenceCount:
    """Number of pairs (tuple, W) with W in Gr(i, s) invariant under all r
    matrices: |Gr(i, s)(F_q)| * q^(r (s^2 - i (s - i))).

    The pairs are also enumerated directly when q^(r s^2) |Gr(i, s)| fits
    the budget; otherwise ``enumerated`` is None.
    """
    StratumQuery(s, r, i)
    if not field.is_finite:
        raise UsageError("incidence counts need a finite field")
    q = field.q
    formula = gaussian_binomial(s, i, q) * q ** (r * (s * s - i * (s - i)))
    cost = q ** (r * s * s) * gaussian_binomial(s, i, q)
    if cost > budget_from_env(budget):
        return IncidenceCount(formula, None)
    total = q ** (r * s * s)
    hits = 0
    step = max(1, _BLOCK_ENTRIES // max(1, gaussian_binomial(s, i, q) * r * s * s))
    for lo in range(0, total, step):
        T = index_to_tuples(field, np.arange(lo, min(total, lo + step)), r, s * s).reshape(-1, r, s, s)
        for piv, block in grassmannian_blocks(field, i, s):
            bb, _, _ = _invariant_pairs(field, T, block, piv)
            hits += int(bb.size)
    return IncidenceCount(formula, hits)


def spanning_tuples(q: int, s: int, r: int) -> int:
    """r-tuples of vectors spanning F_q^s, by inclusion-exclusion over subspaces."""
    if s < 0 or r < 0:
        return 0
    return sum((-1) ** (s - k) * q ** ((s - k) * (s - k - 1) // 2) * gaussian_binomial(s, k, q) * q ** (r * k)
               for k in range(s + 1))


def rank_stratum_count(q: int, n: int, r: int, s: int) -> int:
    """r-tuples of vectors in F_q^n whose span has dimension exactly s."""
    if isinstance(q, Field):
        q = q.q
    if s < 0 or s > min(n, r):
        return 0
    return gaussian_binomial(n, s, q) * spanning_tuples(q, s, r)


def rank_strata_enumerate(field: Field, n: int, r: int, budget=None) -> dict:
    """Brute-force {s: count} over all q^(n r) tuples."""
    total = field.q ** (n * r)
    budget = budget_from_env(budget)
    if total > budget:
        raise BudgetExceeded(total, budget, "tuples")
    out = {k: 0 for k in range(min(n, r) + 1)}
    if r == 0:
        return {0: 1}
    for lo in range(0, total, 1 << 15):
        T = index_to_tuples(field, np.arange(lo, min(total, lo + (1 << 15))), r, n)
        ranks = batched_rref(field, T)[1]
        for k, c in zip(*np.unique(ranks, return_counts=True)):
            out[int(k)] += int(c)
    return out


# ----------------------------------------------------------------------------
# the slice Y

@dataclass(frozen=True)
class YSliceSpec:
    """Parameters of Y: an invertible (s-1)x(s-1) matrix ``a`` with no
    standard basis eigenvector and s-1 distinct nonzero ``lambdas``.

    A standard basis vector e_j is an eigenvector of a exactly when column j
    of a vanishes off the diagonal, a condition that does not depend on the
    field, so the check over extensions reduces to inspecting columns.
    """
    field: Field
    s: int
    r: int
    a: np.ndarray = dc_field(compare=False)
    lambdas: tuple = ()

    def __post_init__(self):
        F, s = self.field, self.s
        if not F.is_finite:
            raise UsageError("the slice is built over a finite field")
        if s < 3:
            raise UsageError("the slice Y needs s >= 3")
        if self.r < 2:
            raise UsageError("the slice Y needs r >= 2")
        a = F.check(np.asarray(self.a, dtype=np.int64))
        if a.shape != (s - 1, s - 1):
            raise UsageError(f"a must be {s - 1}x{s - 1}")
        if rank(F, a) < s - 1:
            raise UsageError("a must be invertible")
        for j in range(s - 1):
            if not np.any(np.delete(a[:, j], j) != 0):
                raise UsageError(f"standard basis vector e_{j + 2} is an eigenvector of a")
        lam = tuple(int(x) for x in F.check(np.asarray(self.lambdas, dtype=np.int64)))
        if len(lam) != s - 1:
            raise UsageError(f"need {s - 1} lambdas")
        if 0 in lam:
            raise UsageError("lambdas must be nonzero")
        if len(set(lam)) != len(lam):
            raise UsageError("lambdas must be pairwise distinct")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "lambdas", lam)

    @property
    def n_params(self) -> int:
        return (self.r - 1) * (self.s - 1)


def default_Y_spec(r: int = 2, field: Field | None = None, s: int = 3) -> YSliceSpec:
    """a = [[0, 1], [1, 1]] and lambdas = (1, 2) over F_5 (s = 3)."""
    if s != 3:
        raise UsageError("the default slice is defined for s = 3")
    return YSliceSpec(field or prime_field(5), 3, r, np.array([[0, 1], [1, 1]]), (1, 2))


def build_Y_point(spec: YSliceSpec, x):
    """The r-tuple with first matrix diag(0, a) and, for i = 2..r, zero first
    row, first column (0, x_i) and diagonal block diag(lambdas)."""
    F, s, r = spec.field, spec.s, spec.r
    x = F.check(np.asarray(x, dtype=np.int64).reshape(-1))
    if x.size != spec.n_params:
        raise UsageError(f"x must have {spec.n_params} entries")
    x = x.reshape(r - 1, s - 1)
    out = F.zeros((r, s, s))
    out[0, 1:, 1:] = spec.a
    for k in range(1, r):
        out[k, 1:, 0] = x[k - 1]
        out[k, 1:, 1:] = np.diag(spec.lambdas)
    return out


@dataclass(frozen=True)
class YIntersection:
    hits: tuple
    in_T2: tuple
    points: int


def intersect_Y_X1(spec: YSliceSpec, max_ext_degree: int | None = None, budget=None) -> YIntersection:
    """All x over F_q whose Y-point lies in X_1, with a T_2 verdict per hit."""
    F = spec.field
    total = F.q ** spec.n_params
    budget = budget_from_env(budget)
    if total > budget:
        raise BudgetExceeded(total, budget, "slice points")
    X = index_to_tuples(F, np.arange(total), 1, spec.n_params)[:, 0, :]
    pts = np.stack([build_Y_point(spec, x) for x in X])
    mask = in_X_i_batch(F, pts, 1, max_ext_degree, budget)
    hits = tuple(tuple(int(v) for v in X[k]) for k in np.nonzero(mask)[0])
    t2 = tuple(bool(v) for v in in_T2_batch(F, pts[mask], max_ext_degree, budget)) if hits else ()
    return YIntersection(hits, t2, total)
