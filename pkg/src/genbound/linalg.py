"""Dense exact linear algebra over a :class:`~genbound.fields.Field`.

Matrices are plain numpy arrays paired with the field they live over.  The
batched row reduction works on stacks of shape ``(B, rows, cols)`` and is the
workhorse of the closure engine and the Grassmannian scans.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .fields import Field


def batched_rref(field: Field, M):
    """Reduced row echelon form of every matrix in a stack.

    Returns ``(R, rank)`` where ``R`` has the shape of ``M`` and ``rank`` has
    shape ``(B,)``.  The nonzero rows of ``R[b]`` are its first ``rank[b]``
    rows.
    """
    M = np.array(M, dtype=object if not field.is_finite else np.int64, copy=True)
    B, R, C = M.shape
    piv = np.zeros(B, dtype=np.int64)
    rows = np.arange(R)
    for c in range(C):
        live = np.nonzero(piv < R)[0]
        if live.size == 0:
            break
        sub = M[live]
        cand = (sub[:, :, c] != 0) & (rows[None, :] >= piv[live, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        b = live[has]
        src = np.argmax(cand[has], axis=1)
        dst = piv[b]
        top = M[b, dst].copy()
        M[b, dst] = M[b, src]
        M[b, src] = top
        prow = field.mul(M[b, dst], field.inv(M[b, dst, c])[:, None])
        M[b, dst] = prow
        factors = M[b, :, c].copy()
        factors[np.arange(b.size), dst] = 0
        M[b] = field.sub(M[b], field.mul(factors[:, :, None], prow[:, None, :]))
        piv[b] += 1
    return M, piv


def row_reduce(field: Field, m):
    """Return ``(rref, rank, pivots)`` for a single 2-d matrix."""
    m = _as_matrix(field, m)
    if m.shape[0] == 0 or m.shape[1] == 0:
        return m.copy(), 0, ()
    R, rank = batched_rref(field, m[None])
    R = R[0]
    rank = int(rank[0])
    pivots = tuple(int(np.flatnonzero(R[i] != 0)[0]) for i in range(rank))
    return R, rank, pivots


def rank(field: Field, m) -> int:
    return row_reduce(field, m)[1]


def _as_matrix(field: Field, m):
    a = np.asarray(m)
    if a.ndim != 2:
        raise UsageError(f"expected a 2-d matrix, got shape {a.shape}")
    if field.is_finite:
        try:
            field.check(a)
        except UsageError:
            raise UsageError(f"matrix entries do not all belong to {field}") from None
        return a.astype(np.int64)
    return field.check(a)


def transpose(m):
    return np.asarray(m).T.copy()


def inverse(field: Field, m):
    m = _as_matrix(field, m)
    n = m.shape[0]
    if m.shape != (n, n):
        raise UsageError("inverse of a non-square matrix")
    aug = np.concatenate([m, field.eye(n)], axis=1)
    R, r, _ = row_reduce(field, aug)
    if r < n or any(R[i, i] == 0 for i in range(n)) or np.any(R[:n, :n] != field.eye(n)):
        raise UsageError("matrix is singular")
    return R[:, n:]


def nullspace(field: Field, m):
    """Basis (rows) of {v : m v = 0}."""
    m = _as_matrix(field, m)
    R, r, piv = row_reduce(field, m)
    n = m.shape[1]
    free = [j for j in range(n) if j not in piv]
    out = field.zeros((len(free), n))
    for k, j in enumerate(free):
        out[k, j] = field.one()
        for i, pj in enumerate(piv):
            out[k, pj] = field.neg(R[i, j])
    return out


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of field^ambient held as its canonical RREF basis.

    Two Subspace objects are equal exactly when they span the same space.
    """
    field: Field
    ambient: int
    rows: tuple

    @classmethod
    def span(cls, field: Field, vectors, ambient: int | None = None) -> "Subspace":
        vecs = np.asarray(vectors)
        if ambient is None:
            if vecs.ndim != 2:
                raise UsageError("ambient dimension needed to span an empty set")
            ambient = vecs.shape[1]
        if vecs.size == 0:
            return cls(field, ambient, ())
        if vecs.ndim != 2 or vecs.shape[1] != ambient:
            raise UsageError(f"vectors must have length {ambient}")
        R, r, _ = row_reduce(field, vecs)
        return cls(field, ambient, _rows_key(R[:r]))

    @classmethod
    def zero(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient, ())

    @classmethod
    def whole(cls, field: Field, ambient: int) -> "Subspace":
        return cls(field, ambient, _rows_key(field.eye(ambient)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis(self):
        if not self.rows:
            return self.field.zeros((0, self.ambient))
        return self.field.asarray(np.array(self.rows, dtype=object)) if not self.field.is_finite \
            else np.array(self.rows, dtype=np.int64)

    @property
    def pivots(self) -> tuple:
        b = self.basis
        return tuple(int(np.flatnonzero(b[i] != 0)[0]) for i in range(self.dim))

    def coordinates(self, v):
        """Coordinates of v in the RREF basis, or None when v is not in the span."""
        v = np.asarray(v)
        if not self.rows:
            return self.field.zeros(0) if not np.any(v != 0) else None
        b = self.basis
        coords = v[list(self.pivots)]
        resid = self.field.sub(v, self.field.matmul(coords, b))
        if np.any(resid != 0):
            return None
        return coords

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def __le__(self, other: "Subspace") -> bool:
        return all(row in other for row in self.basis)


def _rows_key(rows) -> tuple:
    return tuple(tuple(x if isinstance(x, (int,)) else (int(x) if isinstance(x, np.integer) else x)
                       for x in row) for row in rows)


def span_insert(basis: Subspace, v):
    """Return ``(new_subspace, grew)`` for span(basis + {v})."""
    v = np.asarray(v)
    if v.shape != (basis.ambient,):
        raise UsageError(f"vector of length {v.shape} inserted into ambient dimension {basis.ambient}")
    if basis.field.is_finite:
        basis.field.check(v)
    else:
        v = basis.field.asarray(v)
    if v in basis:
        return basis, False
    stacked = np.concatenate([basis.basis, v[None, :]], axis=0)
    return Subspace.span(basis.field, stacked, basis.ambient), True
