"""Grassmannians over finite fields: counting and canonical enumeration."""
from __future__ import annotations

import itertools

import numpy as np

from .errors import UsageError
from .fields import Field


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def grassmannian_blocks(field: Field, k: int, n: int):
    """Yield ``(pivots, bases)`` for every pivot pattern of Gr(k, n)(F_q).

    ``bases`` has shape (N, k, n) and holds RREF bases: row i has a 1 in
    column pivots[i], zeros in the other pivot columns and before its pivot,
    and arbitrary entries in the remaining "free" positions.  Patterns come
    in lexicographic order, free entries in lexicographic order within a
    pattern, so the enumeration is duplicate-free and deterministic.
    """
    if not field.is_finite:
        raise UsageError("Grassmannian enumeration needs a finite field")
    if not (0 <= k <= n):
        raise UsageError(f"no {k}-dimensional subspaces of a {n}-dimensional space")
    q = field.q
    for piv in itertools.combinations(range(n), k):
        free = [(i, j) for i, pj in enumerate(piv) for j in range(pj + 1, n) if j not in piv]
        count = q ** len(free)
        base = np.zeros((k, n), dtype=np.int64)
        for i, pj in enumerate(piv):
            base[i, pj] = 1
        out = np.repeat(base[None], count, axis=0)
        if free:
            idx = np.arange(count, dtype=np.int64)
            for f in range(len(free) - 1, -1, -1):
                i, j = free[f]
                out[:, i, j] = idx % q
                idx //= q
        yield piv, out


def grassmannian(field: Field, k: int, n: int):
    """All RREF bases of Gr(k, n)(F_q) stacked in one (N, k, n) array."""
    blocks = [b for _, b in grassmannian_blocks(field, k, n)]
    if not blocks:
        return np.zeros((0, k, n), dtype=np.int64)
    return np.concatenate(blocks, axis=0)
