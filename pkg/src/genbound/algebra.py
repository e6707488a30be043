"""Finite-dimensional multialgebras given by structure constants.

A multialgebra is a vector space ``A = field^n`` with a finite list of
multilinear operations.  Operation ``m`` of arity ``k`` is stored as a dense
tensor ``T`` of shape ``(n,)*k + (n,)`` with

    m(e_{j1}, ..., e_{jk}) = sum_l T[j1, ..., jk, l] e_l.

Arity 0 encodes a distinguished element (a unit), arity 1 an involution or
other linear map, arity 2 a product.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction

import numpy as np

from .errors import UsageError
from .fields import Field, QQ, embedding, make_extension

SCHEMA_VERSION = "genbound.algebra/1"
LABELS = ("product", "involution", "unit", "other")


@dataclass(frozen=True, eq=False)
class MultiOp:
    arity: int
    tensor: np.ndarray
    label: str = "other"

    def __post_init__(self):
        if self.label not in LABELS:
            raise UsageError(f"unknown op label {self.label!r}")


@dataclass(frozen=True, eq=False)
class AlgebraSpec:
    n: int
    field: Field
    ops: tuple
    name: str = ""
    metadata: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if not self.ops:
            raise UsageError("a multialgebra needs at least one operation")
        for i, op in enumerate(self.ops):
            want = (self.n,) * op.arity + (self.n,)
            if op.tensor.shape != want:
                raise UsageError(f"op {i} ({op.label}) has tensor shape {op.tensor.shape}, expected {want}")

    @property
    def preset(self):
        return self.metadata.get("preset")

    def op_index(self, label: str) -> int:
        for i, op in enumerate(self.ops):
            if op.label == label:
                return i
        raise UsageError(f"{self.name or 'algebra'} has no {label} op")

    def has_label(self, label: str) -> bool:
        return any(op.label == label for op in self.ops)

    def without(self, label: str) -> "AlgebraSpec":
        ops = tuple(op for op in self.ops if op.label != label)
        return replace(self, ops=ops, name=f"{self.name}-no-{label}",
                       metadata={**self.metadata, "dropped": label})

    def element(self, coords):
        a = self.field.asarray(coords)
        if a.shape != (self.n,):
            raise UsageError(f"element must have {self.n} coordinates")
        return a

    def tuple(self, data):
        """Coerce an r-tuple of elements to an ``(r, n)`` array.  Matrix
        presets also accept ``(r, s, s)`` row-major matrices."""
        a = np.asarray(data, dtype=object if not self.field.is_finite else None)
        if a.size == 0:
            return self.field.zeros((0, self.n))
        if a.ndim == 3 and a.shape[1] * a.shape[2] == self.n:
            a = a.reshape(a.shape[0], self.n)
        if a.ndim == 1 and a.shape[0] == self.n:
            a = a[None, :]
        if a.ndim != 2 or a.shape[1] != self.n:
            raise UsageError(f"tuple entries must have {self.n} coordinates, got shape {a.shape}")
        if self.field.is_finite:
            if a.dtype == object or not np.issubdtype(a.dtype, np.integer):
                return self.field.asarray(a)
            try:
                return self.field.check(a.astype(np.int64))
            except UsageError:
                raise UsageError(f"tuple entries are not elements of {self.field}") from None
        return self.field.asarray(a)


def apply_tensor(field: Field, tensor, args):
    """Contract a structure tensor against batched arguments.

    ``args[i]`` has shape ``(..., n)``; the result has the broadcast batch
    shape plus ``(n,)``.
    """
    n = tensor.shape[-1]
    k = tensor.ndim - 1
    if len(args) != k:
        raise UsageError(f"op of arity {k} applied to {len(args)} arguments")
    if k == 0:
        return tensor.copy()
    res = tensor.reshape(n, -1)
    out = field.matmul(np.asarray(args[0]), res)
    for x in args[1:]:
        rest = out.shape[-1] // n
        out = out.reshape(out.shape[:-1] + (n, rest))
        out = field.matmul(np.asarray(x)[..., None, :], out)[..., 0, :]
    return out


def eval_op(alg: AlgebraSpec, op_index: int, args):
    op = alg.ops[op_index]
    if len(args) != op.arity:
        raise UsageError(f"op {op_index} ({op.label}) has arity {op.arity}, got {len(args)} arguments")
    elems = [alg.element(a) if np.asarray(a).ndim == 1 else alg.tuple(a) for a in args]
    if alg.field.is_finite:
        for e in elems:
            alg.field.check(e)
    return apply_tensor(alg.field, op.tensor, elems)


def multiply(alg: AlgebraSpec, a, b):
    return eval_op(alg, alg.op_index("product"), [a, b])


# ----------------------------------------------------------------------------
# presets

def _tensor(field: Field, n, arity, entries, codes=False):
    """Dense tensor from (index, value) pairs; integer values are mapped
    through Z -> field unless ``codes`` says they are element codes."""
    t = field.zeros((n,) * arity + (n,))
    for idx, val in entries:
        v = field.asarray(val) if codes or not isinstance(val, (int, np.integer)) else field.from_int(val)
        t[idx] = field.add(t[idx], v)
    return t


def zero_module(n: int, field: Field) -> AlgebraSpec:
    """k^n with the zero product."""
    prod = MultiOp(2, field.zeros((n, n, n)), "product")
    return AlgebraSpec(n, field, (prod,), f"zero_module({n})", {"preset": "zero_module", "n": n})


def split_etale(n: int, field: Field, unital: bool = True) -> AlgebraSpec:
    """k^n with componentwise product; the unit (1,...,1) is included unless
    ``unital`` is False."""
    prod = MultiOp(2, _tensor(field, n, 2, [((i, i, i), 1) for i in range(n)]), "product")
    ops = [prod]
    if unital:
        ops.append(MultiOp(0, _tensor(field, n, 0, [((i,), 1) for i in range(n)]), "unit"))
    name = f"split_etale({n})" + ("" if unital else "-nonunital")
    return AlgebraSpec(n, field, tuple(ops), name, {"preset": "split_etale", "n": n, "unital": unital})


def _matrix_ops(s, field, unital):
    n = s * s
    entries = [((i * s + j, j * s + l, i * s + l), 1) for i in range(s) for j in range(s) for l in range(s)]
    ops = [MultiOp(2, _tensor(field, n, 2, entries), "product")]
    if unital:
        ops.append(MultiOp(0, _tensor(field, n, 0, [((i * s + i,), 1) for i in range(s)]), "unit"))
    return ops


def matrix(s: int, field: Field, unital: bool = True) -> AlgebraSpec:
    """Mat_s with basis E_ij at index i*s + j (row-major)."""
    if s < 1:
        raise UsageError("matrix size must be positive")
    name = f"matrix({s})" + ("" if unital else "-nonunital")
    return AlgebraSpec(s * s, field, tuple(_matrix_ops(s, field, unital)), name,
                       {"preset": "matrix", "s": s, "unital": unital})


def symplectic_form(s: int):
    h = s // 2
    J = np.zeros((s, s), dtype=np.int64)
    J[:h, h:] = np.eye(h, dtype=np.int64)
    J[h:, :h] = -np.eye(h, dtype=np.int64)
    return J


def matrix_involution(s: int, kind: str, field: Field) -> AlgebraSpec:
    """Mat_s with unit and the transpose (orthogonal) or the standard
    symplectic involution x -> J x^t J^{-1}."""
    if kind not in ("orthogonal", "symplectic"):
        raise UsageError(f"involution kind must be orthogonal or symplectic, got {kind!r}")
    if kind == "symplectic" and s % 2:
        raise UsageError("the symplectic involution needs even s")
    n = s * s
    ops = _matrix_ops(s, field, True)
    if kind == "orthogonal":
        entries = [((i * s + j, j * s + i), 1) for i in range(s) for j in range(s)]
    else:
        J = symplectic_form(s)
        Jinv = -J
        entries = []
        for i in range(s):
            for j in range(s):
                E = np.zeros((s, s), dtype=np.int64)
                E[i, j] = 1
                img = J @ E.T @ Jinv
                for a, b in zip(*np.nonzero(img)):
                    entries.append(((i * s + j, a * s + b), int(img[a, b])))
    ops.append(MultiOp(1, _tensor(field, n, 1, entries), "involution"))
    return AlgebraSpec(n, field, tuple(ops), f"matrix_involution({s},{kind})",
                       {"preset": "matrix_involution", "s": s, "kind": kind, "unital": True})


# Zorn vector matrices [[a, v], [w, b]] with coordinates
# (a, v1, v2, v3, w1, w2, w3, b).  Product:
#   a'' = a a' + v.w'          v'' = a v' + b' v + w x w'
#   w'' = a' w + b w' - v x v'  b'' = b b' + w.v'
ZORN_A, ZORN_V, ZORN_W, ZORN_B = 0, (1, 2, 3), (4, 5, 6), 7


def _cross_entries():
    # e_i x e_j = eps_ijk e_k
    out = []
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        out.append((i, j, k, 1))
        out.append((j, i, k, -1))
    return out


def zorn_product_entries():
    A, V, W, B = ZORN_A, ZORN_V, ZORN_W, ZORN_B
    e = [((A, A, A), 1), ((B, B, B), 1)]
    for i in range(3):
        e.append(((V[i], W[i], A), 1))        # v . w'
        e.append(((W[i], V[i], B), 1))        # w . v'
        e.append(((A, V[i], V[i]), 1))        # a v'
        e.append(((V[i], B, V[i]), 1))        # b' v
        e.append(((W[i], A, W[i]), 1))        # a' w
        e.append(((B, W[i], W[i]), 1))        # b w'
    for i, j, k, sgn in _cross_entries():
        e.append(((W[i], W[j], V[k]), sgn))   # + w x w'
        e.append(((V[i], V[j], W[k]), -sgn))  # - v x v'
    return e


def split_octonion(field: Field) -> AlgebraSpec:
    """Split octonions in the Zorn vector-matrix model, with product, unit
    and conjugation [[a, v], [w, b]] -> [[b, -v], [-w, a]]."""
    n = 8
    prod = MultiOp(2, _tensor(field, n, 2, zorn_product_entries()), "product")
    unit = _tensor(field, n, 0, [((ZORN_A,), 1), ((ZORN_B,), 1)])
    conj = [((ZORN_A, ZORN_B), 1), ((ZORN_B, ZORN_A), 1)]
    conj += [((i, i), -1) for i in ZORN_V + ZORN_W]
    ops = (prod, MultiOp(0, unit, "unit"), MultiOp(1, _tensor(field, n, 1, conj), "involution"))
    return AlgebraSpec(n, field, ops, "split_octonion", {"preset": "split_octonion", "unital": True})


def zorn_norm(field: Field, x):
    """Norm a b - v.w of Zorn elements (batched over leading axes)."""
    x = np.asarray(x)
    ab = field.mul(x[..., ZORN_A], x[..., ZORN_B])
    vw = field.sum(field.mul(x[..., list(ZORN_V)], x[..., list(ZORN_W)]), axis=-1)
    return field.sub(ab, vw)


def preset(name: str, field: Field, **params) -> AlgebraSpec:
    """Build a preset by name: zero_module(n), split_etale(n[, unital]),
    matrix(s[, unital]), matrix_involution(s, kind), split_octonion."""
    builders = {
        "zero_module": lambda: zero_module(int(params["n"]), field),
        "split_etale": lambda: split_etale(int(params["n"]), field, bool(params.get("unital", True))),
        "matrix": lambda: matrix(int(params["s"]), field, bool(params.get("unital", True))),
        "matrix_involution": lambda: matrix_involution(int(params["s"]), params.get("kind", "orthogonal"), field),
        "split_octonion": lambda: split_octonion(field),
    }
    if name not in builders:
        raise UsageError(f"unknown preset {name!r}; choose from {sorted(builders)}")
    try:
        return builders[name]()
    except KeyError as exc:
        raise UsageError(f"preset {name} needs parameter {exc.args[0]!r}") from None


def base_change(alg: AlgebraSpec, new_field: Field) -> AlgebraSpec:
    """Reinterpret the structure constants over an extension field."""
    old = alg.field
    if old == new_field:
        return alg
    if not old.is_finite or not new_field.is_finite:
        raise UsageError(f"cannot base change from {old} to {new_field}")
    emb = embedding(old, new_field)
    ops = tuple(MultiOp(op.arity, emb[op.tensor], op.label) for op in alg.ops)
    return AlgebraSpec(alg.n, new_field, ops, alg.name, {**alg.metadata, "base_changed_from": str(old)})


# ----------------------------------------------------------------------------
# validation

def validate(alg, samples: int = 100, seed: int = 0) -> list:
    """Spot-check identities on random samples.

    Returns a list of ``{"check", "passed", "detail"}`` dicts.  Accepts an
    AlgebraSpec or the raw mapping of an algebra file; a file with schema
    errors yields only the error entries.
    """
    if isinstance(alg, dict):
        errors = check_algebra_data(alg)
        if errors:
            return [{"check": "schema", "passed": False, "detail": e} for e in errors]
        alg = algebra_from_data(alg)
    F = alg.field
    rng = np.random.default_rng(seed)

    def rand(k):
        if F.is_finite:
            return F.random(rng, (k, alg.n))
        return F.random(rng, (k, alg.n), height=5)

    report = []

    def add(check, ok, detail=""):
        report.append({"check": check, "passed": bool(ok), "detail": detail})

    if not alg.has_label("product"):
        return report
    P = alg.ops[alg.op_index("product")].tensor
    x, y, z = rand(samples), rand(samples), rand(samples)

    def mul(a, b):
        return apply_tensor(F, P, [a, b])

    def fails(a, b):
        return int(np.sum(np.any(a != b, axis=-1)))

    bad = fails(mul(mul(x, y), z), mul(x, mul(y, z)))
    add("associativity", bad == 0, f"{bad}/{samples} samples fail")
    bad = fails(mul(x, mul(x, y)), mul(mul(x, x), y)) + fails(mul(mul(y, x), x), mul(y, mul(x, x)))
    add("alternativity", bad == 0, f"{bad} failures over {2 * samples} checks")
    if alg.has_label("unit"):
        u = alg.ops[alg.op_index("unit")].tensor
        ub = np.broadcast_to(u, x.shape)
        bad = fails(mul(ub, x), x) + fails(mul(x, ub), x)
        add("unit", bad == 0, f"{bad} failures")
    if alg.has_label("involution"):
        S = alg.ops[alg.op_index("involution")].tensor

        def sig(a):
            return apply_tensor(F, S, [a])
        bad = fails(sig(mul(x, y)), mul(sig(y), sig(x)))
        add("anti-automorphism", bad == 0, f"{bad}/{samples} samples fail")
        bad = fails(sig(sig(x)), x)
        add("involutive", bad == 0, f"{bad}/{samples} samples fail")
    if alg.preset == "split_octonion":
        lhs = zorn_norm(F, mul(x, y))
        rhs = F.mul(zorn_norm(F, x), zorn_norm(F, y))
        bad = int(np.sum(lhs != rhs))
        add("norm composition", bad == 0, f"{bad}/{samples} samples fail")
    return report


# ----------------------------------------------------------------------------
# file format
#
# {"schema": "genbound.algebra/1", "name": str, "n": int,
#  "field": {"p": int, "m": int} | "rational",
#  "ops": [{"arity": int, "label": str, "tensor": [[j1, ..., jk, l, value], ...]}]}
#
# Values are integers or rational strings ("3/4", "-0.5"); omitted entries are
# zero.  Extension-field values are element codes.

def check_algebra_data(data) -> list:
    errs = []
    if not isinstance(data, dict):
        return ["algebra file must hold a JSON object"]
    n = data.get("n")
    if not isinstance(n, int) or n < 1:
        errs.append("'n' must be a positive integer")
        return errs
    fld = data.get("field")
    if not (fld == "rational" or (isinstance(fld, dict) and isinstance(fld.get("p"), int))):
        errs.append("'field' must be \"rational\" or {\"p\": int, \"m\": int}")
    ops = data.get("ops")
    if not isinstance(ops, list) or not ops:
        errs.append("'ops' must be a nonempty list")
        return errs
    for i, op in enumerate(ops):
        if not isinstance(op, dict) or not isinstance(op.get("arity"), int) or op["arity"] < 0:
            errs.append(f"op {i}: 'arity' must be a nonnegative integer")
            continue
        k = op["arity"]
        if op.get("label", "other") not in LABELS:
            errs.append(f"op {i}: unknown label {op.get('label')!r}")
        for t, trip in enumerate(op.get("tensor", [])):
            if not isinstance(trip, list) or len(trip) != k + 2:
                errs.append(f"op {i} entry {t}: expected {k + 1} indices and a value (shape error)")
                continue
            idx = trip[:-1]
            if not all(isinstance(j, int) and 0 <= j < n for j in idx):
                errs.append(f"op {i} entry {t}: index out of range for n={n} (shape error)")
    return errs


def algebra_from_data(data) -> AlgebraSpec:
    errs = check_algebra_data(data)
    if errs:
        raise UsageError("malformed algebra file: " + "; ".join(errs))
    n = data["n"]
    fld = data["field"]
    field = QQ if fld == "rational" else make_extension(fld["p"], fld.get("m", 1))
    ops = []
    for op in data["ops"]:
        k = op["arity"]
        entries = [(tuple(tr[:-1]), _value(field, tr[-1])) for tr in op.get("tensor", [])]
        codes = field.is_finite and field.m > 1
        ops.append(MultiOp(k, _tensor(field, n, k, entries, codes=codes), op.get("label", "other")))
    return AlgebraSpec(n, field, tuple(ops), data.get("name", ""), dict(data.get("metadata", {})))


def _value(field, v):
    if isinstance(v, bool) or isinstance(v, float):
        raise UsageError(f"tensor values must be integers or rational strings, got {v!r}")
    if field.is_finite and field.m > 1:
        return int(v)
    return Fraction(v) if isinstance(v, str) else int(v)


def algebra_to_data(alg: AlgebraSpec) -> dict:
    F = alg.field
    fld = "rational" if not F.is_finite else {"p": F.p, "m": F.m}
    ops = []
    for op in alg.ops:
        trips = []
        for idx in zip(*np.nonzero(op.tensor != 0)):
            v = op.tensor[idx]
            v = str(v) if isinstance(v, Fraction) else int(v)
            trips.append([int(j) for j in idx] + [v])
        ops.append({"arity": op.arity, "label": op.label, "tensor": trips})
    meta = {k: v for k, v in alg.metadata.items() if isinstance(v, (int, str, bool))}
    return {"schema": SCHEMA_VERSION, "name": alg.name, "n": alg.n, "field": fld, "ops": ops, "metadata": meta}


def load_algebra(path) -> AlgebraSpec:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"malformed algebra file {path}: {exc}") from None
    return algebra_from_data(data)


def save_algebra(alg: AlgebraSpec, path) -> None:
    with open(path, "w") as fh:
        json.dump(algebra_to_data(alg), fh, indent=1)
