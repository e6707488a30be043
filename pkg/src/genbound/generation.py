"""Subalgebra closure, generation tests and generator-number searches.

The closure of a tuple is computed by saturation: start from the span of the
tuple and the values of all arity-0 operations, apply every operation to all
argument tuples drawn from the current basis, and re-span until nothing new
appears.  Every monomial value lies in this span and the span is closed, so
it equals the subalgebra generated.  The engine is batched: ``closure_batch``
runs many tuples through the same numpy pipeline.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraSpec, apply_tensor, split_octonion
from .errors import BudgetExceeded, UsageError
from .fields import Field, QQ
from .linalg import Subspace, batched_rref

DEFAULT_BUDGET = 10**8


def budget_from_env(budget=None) -> int:
    if budget is not None:
        return int(budget)
    return int(float(os.environ.get("GENBOUND_BUDGET", DEFAULT_BUDGET)))


@dataclass(frozen=True)
class ClosureResult:
    basis: Subspace
    dim: int
    generates: bool
    witness_depth: int


@dataclass(frozen=True)
class NmaxResult:
    value: int
    certificate: Subspace | None
    status: str


def _op_images(field: Field, ops, V):
    """All values of the positive-arity ops on argument tuples from the rows
    of ``V`` (shape (B, t, n)); returns (B, N, n)."""
    B, t, n = V.shape
    out = []
    for op in ops:
        k = op.arity
        if k == 0:
            continue
        # contract one argument slot at a time; axis layout (B, t, ..., t, rest)
        res = field.matmul(V, op.tensor.reshape(n, -1))          # (B, t, n^(k-1)*n)
        lead = 1
        for _ in range(k - 1):
            rest = res.shape[-1] // n
            res = res.reshape(B, lead * t, n, rest)
            res = field.matmul(V[:, None, :, :], res)            # (B, lead*t, t, rest)
            lead *= t
        out.append(res.reshape(B, -1, n))
    if not out:
        return field.zeros((B, 0, n))
    return np.concatenate(out, axis=1)


def closure_batch(alg: AlgebraSpec, tuples, max_rounds=None):
    """Close a batch of tuples.

    ``tuples`` has shape (B, r, n).  Returns ``(basis, dims, rounds)`` where
    ``basis[b, :dims[b]]`` is the RREF basis of the closure of tuple b.
    """
    F = alg.field
    n = alg.n
    T = np.asarray(tuples)
    if T.ndim != 3 or T.shape[2] != n:
        raise UsageError(f"expected tuples of shape (B, r, {n}), got {T.shape}")
    B = T.shape[0]
    consts = [op.tensor for op in alg.ops if op.arity == 0]
    start = T
    if consts:
        c = np.stack(consts)[None].repeat(B, axis=0)
        start = np.concatenate([T, c], axis=1) if T.shape[1] else c
    if start.shape[1] == 0:
        return F.zeros((B, n, n)), np.zeros(B, dtype=np.int64), np.zeros(B, dtype=np.int64)
    R, dims = batched_rref(F, start)
    if R.shape[1] < n:
        R = np.concatenate([R, F.zeros((B, n - R.shape[1], n))], axis=1)
    basis = R[:, :n].copy()
    rounds = np.zeros(B, dtype=np.int64)
    active = np.nonzero((dims < n) & (dims > 0))[0]
    ops = [op for op in alg.ops if op.arity > 0]
    limit = n + 1 if max_rounds is None else max_rounds
    step = 0
    while active.size and step < limit:
        step += 1
        t = int(dims[active].max())
        V = basis[active, :t]
        imgs = _op_images(F, ops, V)
        stacked = np.concatenate([V, imgs], axis=1)
        R, new_dims = batched_rref(F, stacked)
        if R.shape[1] < n:
            R = np.concatenate([R, F.zeros((active.size, n - R.shape[1], n))], axis=1)
        grew = new_dims > dims[active]
        basis[active] = R[:, :n]
        rounds[active[grew]] += 1
        dims[active] = new_dims
        active = active[grew & (new_dims < n)]
    return basis, dims, rounds


def subalgebra_closure(alg: AlgebraSpec, tup) -> ClosureResult:
    T = alg.tuple(tup)
    basis, dims, rounds = closure_batch(alg, T[None])
    d = int(dims[0])
    sub = Subspace.span(alg.field, basis[0, :d], alg.n)
    return ClosureResult(sub, d, d == alg.n, int(rounds[0]))


def generates(alg: AlgebraSpec, tup) -> bool:
    return subalgebra_closure(alg, tup).generates


def certificate_words(n_gens: int, n_words: int):
    """Left-normed product words used as a quick full-rank certificate.

    A word is a tuple of generator indices read as (((g_i g_j) g_k) ...).
    Words with strictly increasing indices come first (g_i, g_i g_j, ...),
    then the remaining words by length, until ``n_words`` are listed.
    """
    words = []
    for length in range(1, n_gens + 1):
        words.extend(itertools.combinations(range(n_gens), length))
    length = 1
    while len(words) < n_words and n_gens:
        seen = set(words)
        words.extend(w for w in itertools.product(range(n_gens), repeat=length) if w not in seen)
        length += 1
        if length > n_words:
            break
    return words[:n_words]


def _certified_full(alg: AlgebraSpec, T):
    """Boolean mask of tuples whose certificate words already span A.
    Exact in one direction only: False means "unknown"."""
    F = alg.field
    B, r, n = T.shape
    if not alg.has_label("product") or r == 0:
        return np.zeros(B, dtype=bool)
    P = alg.ops[alg.op_index("product")].tensor
    consts = [op.tensor for op in alg.ops if op.arity == 0]
    words = certificate_words(r, n - len(consts))
    if len(words) + len(consts) < n:
        return np.zeros(B, dtype=bool)
    # right multiplication by generator g: (w g)_l = sum_jk w_j P[j,k,l] g_k
    Rg = F.matmul(T, np.moveaxis(P, 1, 0).reshape(n, n * n)).reshape(B, r, n, n)
    vals = {}
    rows = [np.broadcast_to(c, (B, n)) for c in consts]
    for w in words:
        if len(w) == 1:
            v = T[:, w[0]]
        else:
            v = F.matmul(vals[w[:-1]][:, None, :], Rg[:, w[-1]])[:, 0, :]
        vals[w] = v
        rows.append(v)
    M = np.stack(rows, axis=1)
    return batched_rref(F, M)[1] == n


def generates_batch(alg: AlgebraSpec, tuples):
    """Generation verdict for each tuple in a (B, r, n) batch."""
    T = np.asarray(tuples)
    out = _certified_full(alg, T)
    rest = np.nonzero(~out)[0]
    if rest.size:
        out[rest] = closure_batch(alg, T[rest])[1] == alg.n
    return out


def is_closed(alg: AlgebraSpec, sub: Subspace) -> bool:
    """True when ``sub`` contains every arity-0 value and is stable under all ops."""
    F = alg.field
    for op in alg.ops:
        if op.arity == 0 and op.tensor not in sub:
            return False
    if sub.dim == 0:
        return True
    imgs = _op_images(F, [op for op in alg.ops if op.arity], sub.basis[None])[0]
    return all(v in sub for v in imgs)


# ----------------------------------------------------------------------------
# exhaustive enumeration helpers

def index_to_tuples(field: Field, idx, r: int, n: int):
    """Tuples of F_q^(r n) indexed lexicographically: index 0 is all zeros,
    the last coordinate of the last entry varies fastest."""
    idx = np.asarray(idx, dtype=np.int64).copy()
    L = r * n
    q = field.q
    digits = np.zeros((idx.size, L), dtype=np.int64)
    for k in range(L - 1, -1, -1):
        digits[:, k] = idx % q
        idx //= q
    return digits.reshape(-1, r, n)


def _chunks(total, size):
    for lo in range(0, total, size):
        yield lo, min(lo + size, total)


def min_generators_exhaustive(alg: AlgebraSpec, r_max: int, budget=None, chunk=1 << 13):
    """Smallest r <= r_max for which some r-tuple over the finite field
    generates, with the lexicographically first witness; None if no r works.

    Raises BudgetExceeded before scanning a level whose q^(rn) tuples would
    push the cumulative closure count past the budget.
    """
    F = alg.field
    if not F.is_finite:
        raise UsageError("exhaustive search needs a finite field")
    budget = budget_from_env(budget)
    spent = 0
    for r in range(r_max + 1):
        total = F.q ** (r * alg.n)
        if spent + total > budget:
            raise BudgetExceeded(spent + total, budget, "closures")
        spent += total
        if r == 0:
            if closure_batch(alg, F.zeros((1, 0, alg.n)))[1][0] == alg.n:
                return 0, F.zeros((0, alg.n))
            continue
        for lo, hi in _chunks(total, chunk):
            T = index_to_tuples(F, np.arange(lo, hi), r, alg.n)
            ok = generates_batch(alg, T)
            if ok.any():
                return r, T[int(np.argmax(ok))]
    return None


@dataclass(frozen=True)
class RandomizedGenResult:
    r_estimate: int | None
    status: str
    witness: np.ndarray | None
    trials_used: int


def min_generators_randomized(alg: AlgebraSpec, r_max: int, trials: int = 8, seed: int = 0,
                              height: int = 1):
    """Randomised upper estimate of gen_k(A) over QQ.

    For r = 0, 1, ... samples integer tuples from [-H, H] (H doubles after
    every failed trial) and returns the first r with a generating sample.
    Failures are evidence only: status is always "probabilistic".
    """
    F = alg.field
    if F is not QQ and F.is_finite:
        raise UsageError("randomised search is for the rational field; use the exhaustive search over F_q")
    rng = np.random.default_rng(seed)
    used = 0
    for r in range(r_max + 1):
        H = height
        for _ in range(trials if r else 1):
            T = F.random(rng, (r, alg.n), height=H)
            used += 1
            if generates(alg, T):
                return RandomizedGenResult(r, "probabilistic", T, used)
            H *= 2
    return RandomizedGenResult(None, "probabilistic", None, used)


# ----------------------------------------------------------------------------
# maximal proper subalgebras

NMAX_FORMULAS = {
    "matrix": lambda md: md["s"] ** 2 - md["s"] + 1,
    "split_octonion": lambda md: 6,
    "zero_module": lambda md: md["n"] - 1,
    "split_etale": lambda md: md["n"] - 1,
}


def nmax(alg: AlgebraSpec, mode: str = "formula", budget=None) -> NmaxResult:
    """Largest dimension of a proper subalgebra.

    ``formula`` returns the known value for a preset.  ``exhaustive_subspaces``
    scans every proper subspace over the given finite field, largest
    dimension first, and returns the first op-closed one found; this is exact
    over that field and a lower bound for the value over the algebraic closure.
    """
    if mode == "formula":
        key = alg.preset
        if key not in NMAX_FORMULAS or (key == "matrix" and not alg.metadata.get("unital", True)):
            raise UsageError(f"no n_max formula for {alg.name or 'this algebra'}")
        return NmaxResult(NMAX_FORMULAS[key](alg.metadata), None, "formula")
    if mode != "exhaustive_subspaces":
        raise UsageError(f"unknown nmax mode {mode!r}")
    from .grassmann import gaussian_binomial, grassmannian_blocks
    F = alg.field
    if not F.is_finite:
        raise UsageError("exhaustive n_max needs a finite field")
    budget = budget_from_env(budget)
    cost = sum(gaussian_binomial(alg.n, k, F.q) for k in range(alg.n))
    if cost > budget:
        raise BudgetExceeded(cost, budget, "subspace tests")
    for k in range(alg.n - 1, -1, -1):
        for _, block in grassmannian_blocks(F, k, alg.n):
            for W in block:
                sub = Subspace.span(F, W, alg.n)
                if is_closed(alg, sub):
                    return NmaxResult(k, sub, "exact_over_this_field")
    return NmaxResult(-1, None, "exact_over_this_field")


def closed_subspaces(alg: AlgebraSpec, k: int) -> list:
    """Every op-closed k-dimensional subspace over the finite field."""
    from .grassmann import grassmannian_blocks
    F = alg.field
    out = []
    for _, block in grassmannian_blocks(F, k, alg.n):
        for W in block:
            sub = Subspace.span(F, W, alg.n)
            if is_closed(alg, sub):
                out.append(sub)
    return out


# ----------------------------------------------------------------------------
# sextonions

def find_sextonion(seed: int = 0, field: Field = QQ, alg: AlgebraSpec | None = None):
    """Locate a 6-dimensional subalgebra of the split octonions and three
    elements generating exactly it.

    Candidates are triples of isotropic Zorn basis elements (the two diagonal
    idempotents and the six nilpotent off-diagonal units), visited in a
    seeded random order; each triple is closed and the first closure of
    dimension 6 is returned.
    """
    if field.is_finite and field.q < 3:
        raise UsageError("find_sextonion expects QQ or F_q with q >= 3")
    alg = alg or split_octonion(field)
    if alg.n != 8:
        raise UsageError("find_sextonion needs the split octonion preset")
    F = alg.field
    I = F.eye(8)
    pool = [I[i] for i in range(8)]
    triples = list(itertools.combinations(range(len(pool)), 3))
    order = np.random.default_rng(seed).permutation(len(triples))
    for t in order:
        gens = np.stack([pool[i] for i in triples[t]])
        res = subalgebra_closure(alg, gens)
        if res.dim == 6:
            return res.basis, gens
    raise RuntimeError("no 6-dimensional closure among candidate triples")  # pragma: no cover


# ----------------------------------------------------------------------------

def unital_gap(alg: AlgebraSpec, tup):
    """(generates as unital multialgebra, generates with the unit dropped)."""
    if not alg.has_label("unit"):
        raise UsageError("unital_gap needs an algebra with a unit op")
    return generates(alg, tup), generates(alg.without("unit"), tup)
