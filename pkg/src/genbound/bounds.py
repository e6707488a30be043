"""Generator-number bounds and codimension formulas.

Everything here is integer arithmetic.  Bounds whose proofs need extra
hypotheses on the base field carry them as flags in :class:`BoundResult`
instead of being withheld.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .errors import UsageError


def _nonneg(**kw):
    for k, v in kw.items():
        if int(v) != v or v < 0:
            raise UsageError(f"{k} must be a nonnegative integer, got {v!r}")


def forster(d: int, gen_k: int) -> int:
    _nonneg(d=d, gen_k=gen_k)
    return d + gen_k


def main2(d: int, n: int, n_max: int) -> int:
    """floor(d / (n - n_max)) + n_max + 1."""
    _nonneg(d=d, n_max=n_max)
    if not n_max < n:
        raise UsageError("main2 needs n_max < n")
    return d // (n - n_max) + n_max + 1


def azumaya_upper(d: int, s: int) -> int:
    _nonneg(d=d)
    if s < 2:
        raise UsageError("azumaya_upper needs s >= 2")
    return d // (s - 1) + 2


def azumaya_lower(d: int, s: int) -> int:
    _nonneg(d=d)
    if s == 2:
        raise UsageError("azumaya_lower needs s >= 3; use azumaya_lower_s2 for s = 2")
    if s < 2:
        raise UsageError("azumaya_lower needs s >= 3")
    return d // (2 * (s - 1)) + 2


def azumaya_lower_s2(d: int) -> int:
    _nonneg(d=d)
    return 2 * ((d + 2) // 4) + 2


def involution_bound(d: int, s: int, kind: str) -> int:
    _nonneg(d=d)
    if s < 1:
        raise UsageError("s must be positive")
    if kind == "orthogonal":
        if s == 4:
            return (d + 1) // 4 + 1
        if s < 2:
            raise UsageError("orthogonal involution bound needs s >= 2")
        return (d + s - 2) // (2 * s - 3) + 1
    if kind == "symplectic":
        if s % 2:
            raise UsageError("symplectic involutions need even s")
        if s == 2:
            return d + 2
        if s == 4:
            return (d + 3) // 4 + 1
        if s == 6:
            return (d + 6) // 9 + 1
        return (d + s - 1) // (2 * s - 3) + 1
    raise UsageError(f"involution kind must be orthogonal or symplectic, got {kind!r}")


def octonion_upper(d: int) -> int:
    _nonneg(d=d)
    return (d + 1) // 2 + 3


def main3_lower(d: int, n: int, dimG: int, rho: int) -> int:
    """floor((d + 2 dim G - rho) / (2n)) + 1."""
    _nonneg(d=d, dimG=dimG, rho=rho)
    if n < 1:
        raise UsageError("n must be positive")
    return (d + 2 * dimG - rho) // (2 * n) + 1


# ----------------------------------------------------------------------------
# codimension formulas c_A(r) = r n - dim Z_r

@dataclass(frozen=True)
class CodimFormula:
    preset: str
    n: int
    n_max: int | None
    r_min: int
    params: dict = dc_field(default_factory=dict)

    def __call__(self, r: int) -> int:
        return codim_formula(self.preset, r, **self.params)


def _preset_params(preset: str, params: dict) -> tuple:
    """(n, n_max, smallest valid r) of a preset."""
    if preset == "matrix":
        s = int(params["s"])
        if s < 1:
            raise UsageError("s must be positive")
        return s * s, s * s - s + 1, 1
    if preset == "split_octonion":
        return 8, 6, 3
    if preset == "zero_module":
        n = int(params["n"])
        return n, n - 1, n
    if preset == "split_etale":
        n = int(params["n"])
        return n, n - 1, 1
    if preset == "matrix_involution":
        s = int(params["s"])
        if params.get("kind", "orthogonal") != "orthogonal":
            raise UsageError("no codimension formula for the symplectic involution")
        return s * s, None, 1
    raise UsageError(f"no codimension formula for preset {preset!r}")


def codim_formula(preset: str, r: int, **params) -> int:
    """c_A(r) for the presets:

    matrix(s)          (r-1)(s-1)
    zero_module(n)     r - n + 1       (r >= n)
    split_etale(n)     r               (unital)
    split_octonion     2r - 5          (r >= 3)
    matrix_involution  r(2s-3) - (s-2) orthogonal, s != 4; 4r - 1 for s = 4
    """
    try:
        n, _, r_min = _preset_params(preset, params)
    except KeyError as exc:
        raise UsageError(f"preset {preset} needs parameter {exc.args[0]!r}") from None
    if r < r_min:
        raise UsageError(f"the {preset} codimension formula holds for r >= {r_min}")
    if preset == "matrix":
        return (r - 1) * (int(params["s"]) - 1)
    if preset == "zero_module":
        return r - n + 1
    if preset == "split_etale":
        return r
    if preset == "split_octonion":
        return 2 * r - 5
    s = int(params["s"])
    dimZ = 12 * r + 1 if s == 4 else r * (s * s - 2 * s + 3) + (s - 2)
    return r * n - dimZ


def codim_function(preset: str, **params) -> CodimFormula:
    n, n_max, r_min = _preset_params(preset, params)
    return CodimFormula(preset, n, n_max, r_min, dict(params))


def min_r_for_d(d: int, codim, r_start: int | None = None, r_limit: int = 10**6) -> int:
    """Smallest r with codim(r) > d, which bounds gen from above."""
    _nonneg(d=d)
    r = r_start if r_start is not None else getattr(codim, "r_min", 0)
    while r <= r_limit:
        if codim(r) > d:
            return r
        r += 1
    raise UsageError(f"codimension did not exceed {d} for r <= {r_limit}")


def sandwich_holds(preset: str, r: int, **params) -> bool:
    """n_max r <= r n - c_A(r) <= n_max r + n_max (n - n_max) for r > n_max."""
    n, n_max, _ = _preset_params(preset, params)
    if n_max is None:
        raise UsageError(f"n_max is not known for {preset}")
    if r <= n_max:
        raise UsageError("the sandwich is stated for r > n_max")
    dim = r * n - codim_formula(preset, r, **params)
    return n_max * r <= dim <= n_max * r + n_max * (n - n_max)


@dataclass(frozen=True)
class AzumayaVerdict:
    d: int
    s: int
    conclusive: bool
    gen: int | None


def cor_azumaya(d: int, s: int) -> AzumayaVerdict:
    """gen = 2 for Azumaya algebras of degree s over R of dimension d when
    s > 1 + d/2; otherwise inconclusive."""
    _nonneg(d=d)
    if s < 2:
        raise UsageError("cor_azumaya needs s >= 2")
    ok = 2 * s > 2 + d
    return AzumayaVerdict(d, s, ok, 2 if ok else None)


# ----------------------------------------------------------------------------
# aggregated queries

CHAR0 = "char(k) = 0"
INFINITE = "k infinite"
NOT_UNIPOTENT = "Aut(A) not unipotent"


@dataclass(frozen=True)
class BoundQuery:
    d: int
    kind: str
    params: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        _nonneg(d=self.d)
        if self.kind not in _DESCRIPTORS:
            raise UsageError(f"unknown descriptor {self.kind!r}; choose from {sorted(_DESCRIPTORS)}")


@dataclass(frozen=True)
class BoundResult:
    query: BoundQuery
    upper: dict
    lower: dict
    notes: dict

    def record(self) -> dict:
        return {"d": self.query.d, "descriptor": self.query.kind, "params": dict(self.query.params),
                "upper": dict(self.upper), "lower": dict(self.lower),
                "notes": {k: list(v) for k, v in self.notes.items()}}


def _p(params, key):
    try:
        return int(params[key])
    except KeyError:
        raise UsageError(f"descriptor needs parameter {key!r}") from None


def _generic(d, pr):
    n, nm, g = _p(pr, "n"), _p(pr, "n_max"), _p(pr, "gen_k")
    return {"forster": forster(d, g), "main2": main2(d, n, nm)}, {}, {"main2": [INFINITE]}


def _azumaya(d, pr):
    s = _p(pr, "s")
    up = {"azumaya_upper": azumaya_upper(d, s), "main2": main2(d, s * s, s * s - s + 1),
          "forster": forster(d, 2)}
    lo = {"main3_lower": main3_lower(d, s * s, s * s - 1, 4)}
    lo["azumaya_lower"] = azumaya_lower_s2(d) if s == 2 else azumaya_lower(d, s)
    notes = {"azumaya_upper": [INFINITE], "main2": [INFINITE], "azumaya_lower": [CHAR0],
             "main3_lower": [CHAR0, NOT_UNIPOTENT]}
    return up, lo, notes


def _involution(d, pr):
    s, kind = _p(pr, "s"), pr.get("kind", "orthogonal")
    return {"involution": involution_bound(d, s, kind)}, {}, {"involution": [INFINITE]}


def _octonion(d, pr):
    up = {"octonion_upper": octonion_upper(d), "main2": main2(d, 8, 6), "forster": forster(d, 3)}
    lo = {"main3_lower": main3_lower(d, 8, 14, 4)}
    return up, lo, {"octonion_upper": [INFINITE], "main2": [INFINITE], "main3_lower": [CHAR0, NOT_UNIPOTENT]}


def _module(d, pr):
    n = _p(pr, "n")
    return ({"forster": forster(d, n)}, {"main3_lower": main3_lower(d, n, n * n, 2)},
            {"main3_lower": [CHAR0, NOT_UNIPOTENT]})


def _etale(d, pr):
    _p(pr, "n")
    return {"forster": forster(d, 1)}, {}, {}


def _main3(d, pr):
    n, g, rho = _p(pr, "n"), _p(pr, "dimG"), _p(pr, "rho")
    return {}, {"main3_lower": main3_lower(d, n, g, rho)}, {"main3_lower": [CHAR0, NOT_UNIPOTENT]}


_DESCRIPTORS = {"generic": _generic, "azumaya": _azumaya, "involution": _involution,
                "octonion": _octonion, "module": _module, "etale": _etale, "main3": _main3}


def evaluate(query: BoundQuery) -> BoundResult:
    up, lo, notes = _DESCRIPTORS[query.kind](query.d, query.params)
    return BoundResult(query, up, lo, notes)


def bound_table(kind: str, ds, **params) -> list:
    return [evaluate(BoundQuery(d, kind, params)) for d in ds]
