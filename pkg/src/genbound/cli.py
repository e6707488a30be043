"""Command-line front end.

Every subcommand prints JSON records, one per line, each embedding the
configuration that produced it.  Exit status: 0 success, 1 usage error,
2 budget refusal.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np
import sympy

from . import bounds as B
from .algebra import algebra_to_data, load_algebra, preset, validate
from .counting import (codim_exact_slope, codim_from_mc, count_exhaustive, matrix_sandwich_constant, monte_carlo,
                       predicate_label, to_csv)
from .errors import BudgetExceeded, UsageError
from .fields import QQ, field_from_params, make_extension
from .generation import (find_sextonion, min_generators_exhaustive, min_generators_randomized,
                         nmax, subalgebra_closure, unital_gap)
from .strata import (StratumQuery, count_Y_incidence, default_Y_spec, in_T2, in_X_i,
                     intersect_Y_X1, rank_strata_enumerate, rank_stratum_count)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ----------------------------------------------------------------------------
# argument helpers

def _parse_range(text: str) -> list:
    """"0..10", "3", "0,1,5" or a mix such as "0..3,7"."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise UsageError(f"empty range {text!r}")
    return out


def _parse_kv(text: str | None) -> dict:
    out = {}
    for part in (text or "").split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise UsageError(f"expected key=value, got {part!r}")
        k, v = part.split("=", 1)
        v = v.strip()
        out[k.strip()] = int(v) if v.lstrip("-").isdigit() else v
    return out


def _prime_power(q: int) -> tuple:
    f = sympy.factorint(q)
    if len(f) != 1:
        raise UsageError(f"{q} is not a prime power")
    (p, m), = f.items()
    return int(p), int(m)


def _field(args, required=True):
    if getattr(args, "rational", False):
        return QQ
    if getattr(args, "p", None) is None:
        if required:
            raise UsageError("a field is needed: give --p [--m] or --rational")
        return None
    return field_from_params(args.p, args.m)


def _preset_params(args) -> dict:
    out = {}
    for key in ("s", "n", "kind"):
        v = getattr(args, key, None)
        if v is not None:
            out[key] = v
    if getattr(args, "nonunital", False):
        out["unital"] = False
    return out


def _algebra(args, field=None):
    if bool(args.preset) == bool(args.file):
        raise UsageError("give exactly one of --preset or --file")
    if args.file:
        alg = load_algebra(args.file)
        if field is not None and field != alg.field:
            raise UsageError(f"the algebra file is over {alg.field}, not {field}")
        return alg
    return preset(args.preset, field if field is not None else _field(args), **_preset_params(args))


def _read_tuple(args):
    if args.tuple is not None and args.tuple != "-":
        text = args.tuple
    elif args.tuple_file:
        with open(args.tuple_file) as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"tuple is not valid JSON: {exc}") from None
    return data


def _config(args) -> dict:
    skip = {"func", "output", "format", "canonical"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _strip_timing(x):
    if isinstance(x, dict):
        return {k: _strip_timing(v) for k, v in x.items() if k != "elapsed_ms"}
    if isinstance(x, list):
        return [_strip_timing(v) for v in x]
    return x


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return str(x)


def _emit(args, records):
    config = _config(args)
    records = [dict(r, config=config) for r in records]
    if args.canonical:
        records = [_strip_timing(r) for r in records]
    if args.format == "csv":
        text = to_csv([_flatten(r) for r in records])
    elif args.format == "table":
        text = _table([_flatten(r) for r in records])
    else:
        text = "".join(json.dumps(r, sort_keys=True, default=_jsonable) + "\n" for r in records)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _flatten(rec, prefix=""):
    out = {}
    for k, v in rec.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict) and k != "config":
            out.update(_flatten(v, key + "_"))
        else:
            out[key] = v
    return out


def _table(rows):
    rows = [{k: v for k, v in r.items() if k != "config"} for r in rows]
    keys = []
    for r in rows:
        keys.extend(k for k in r if k not in keys)
    cells = [[str(r.get(k, "")) for k in keys] for r in rows]
    width = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    line = lambda vals: "  ".join(v.rjust(w) for v, w in zip(vals, width))
    return "\n".join([line(keys)] + [line(c) for c in cells]) + "\n"


def _vec(a):
    return [[x if isinstance(x, int) else str(x) for x in row] for row in np.asarray(a).tolist()]


# ----------------------------------------------------------------------------
# subcommands

def cmd_gen_test(args):
    alg = _algebra(args)
    tup = alg.tuple(_read_tuple(args))
    res = subalgebra_closure(alg, tup)
    rec = {"algebra": alg.name, "generates": res.generates, "dim": res.dim,
           "witness_depth": res.witness_depth, "basis": _vec(res.basis.basis)}
    if args.unital_gap:
        rec["generates_unital"], rec["generates_nonunital"] = unital_gap(alg, tup)
    return [rec]


def cmd_gen_min(args):
    alg = _algebra(args)
    if alg.field.is_finite and not args.randomized:
        found = min_generators_exhaustive(alg, args.r_max, args.budget)
        rec = {"algebra": alg.name, "method": "exhaustive", "status": "exact_over_this_field",
               "r": None if found is None else found[0],
               "witness": None if found is None else _vec(found[1])}
    else:
        res = min_generators_randomized(alg, args.r_max, args.trials, args.seed)
        rec = {"algebra": alg.name, "method": "randomized", "status": res.status, "r": res.r_estimate,
               "witness": None if res.witness is None else _vec(res.witness), "trials_used": res.trials_used}
    return [rec]


def cmd_nmax(args):
    alg = _algebra(args)
    res = nmax(alg, args.mode, args.budget)
    return [{"algebra": alg.name, "value": res.value, "status": res.status,
             "certificate": None if res.certificate is None else _vec(res.certificate.basis)}]


def cmd_count(args):
    alg = _algebra(args)
    res = count_exhaustive(alg, args.r, args.predicate, args.workers, args.budget, args.max_ext)
    return [dict(res.record(), seed=args.seed)]


def _field_for_q(q):
    return make_extension(*_prime_power(q))


def cmd_estimate(args):
    qs = _parse_range(args.q)
    recs, ests = [], []
    for q in qs:
        alg = _algebra(args, _field_for_q(q))
        e = monte_carlo(alg, args.r, args.samples, args.seed, args.workers)
        ests.append(e)
        recs.append(e.record())
    if len(ests) >= 2:
        recs.append(codim_from_mc(ests[0], ests[-1]).record())
    return recs


def cmd_slope(args):
    counts = []
    for q in _parse_range(args.q):
        alg = _algebra(args, _field_for_q(q))
        counts.append(count_exhaustive(alg, args.r, args.predicate, args.workers, args.budget, args.max_ext))
    expected = args.expected_codim
    if expected is None and predicate_label(args.predicate) == "nongen" and args.preset:
        try:
            expected = B.codim_formula(args.preset, args.r, **_preset_params(args))
        except UsageError:
            expected = None
    constant = args.constant
    if constant is None and args.preset == "matrix" and args.s:
        constant = matrix_sandwich_constant(args.s)
    est = codim_exact_slope(counts, expected, constant)
    return [c.record() for c in counts] + [dict(est.record(), expected_codim=expected)]


def cmd_strata(args):
    mode = args.mode
    if mode == "rank":
        F = _field(args)
        recs = [{"mode": "rank", "q": F.q, "n": args.n, "r": args.r, "s": k,
                 "count": rank_stratum_count(F.q, args.n, args.r, k)} for k in range(min(args.n, args.r) + 1)]
        if args.enumerate:
            brute = rank_strata_enumerate(F, args.n, args.r, args.budget)
            for rec in recs:
                rec["enumerated"] = brute[rec["s"]]
        return recs
    if mode == "incidence":
        F = _field(args)
        res = count_Y_incidence(F, args.s, args.r, args.i, args.budget)
        return [{"mode": "incidence", "q": F.q, "s": args.s, "r": args.r, "i": args.i,
                 "formula": res.formula, "enumerated": res.enumerated, "agree": res.agree}]
    if mode == "y-slice":
        F = _field(args, required=False)
        spec = default_Y_spec(args.r, F) if F is not None else default_Y_spec(args.r)
        res = intersect_Y_X1(spec, args.max_ext, args.budget)
        return [{"mode": "y-slice", "q": spec.field.q, "s": spec.s, "r": spec.r, "points": res.points,
                 "hits": [list(h) for h in res.hits], "hits_in_T2": list(res.in_T2)}]
    F = _field(args)
    if args.s is None:
        raise UsageError("--s is needed for stratum membership")
    tup = np.asarray(_read_tuple(args), dtype=np.int64)
    if mode == "xi":
        if args.i is None:
            raise UsageError("--i is needed for X_i membership")
        val = in_X_i(F, tup, StratumQuery(args.s, len(tup), args.i, args.max_ext))
        return [{"mode": "xi", "i": args.i, "in_X_i": val}]
    if mode == "t2":
        return [{"mode": "t2", "in_T2": in_T2(F, tup, args.max_ext, args.s)}]
    raise UsageError(f"unknown strata mode {mode!r}")


_BOUND_FLAGS = ("azumaya", "involution", "octonion", "module", "etale", "generic", "main3")


def cmd_bounds(args):
    chosen = [k for k in _BOUND_FLAGS if getattr(args, k) is not None]
    if len(chosen) != 1:
        raise UsageError("give exactly one algebra descriptor, e.g. --azumaya s=3")
    kind = chosen[0]
    params = _parse_kv(getattr(args, kind))
    recs = []
    for r in B.bound_table(kind, _parse_range(args.d), **params):
        rec = r.record()
        if kind == "azumaya":
            v = B.cor_azumaya(r.query.d, int(params["s"]))
            rec["cor_gen_equals_2"] = v.conclusive
        recs.append(rec)
    return recs


def cmd_sextonion(args):
    F = _field(args, required=False) or QQ
    basis, gens = find_sextonion(args.seed, F)
    return [{"field": str(F), "dim": basis.dim, "basis": _vec(basis.basis), "generators": _vec(gens)}]


def cmd_validate(args):
    alg = _algebra(args)
    report = validate(alg, args.samples, args.seed)
    return [{"algebra": alg.name, "passed": all(c["passed"] for c in report), "checks": report}]


def cmd_export(args):
    return [algebra_to_data(_algebra(args))]


# ----------------------------------------------------------------------------

def _add_algebra(p):
    g = p.add_argument_group("algebra")
    g.add_argument("--preset", help="zero_module | split_etale | matrix | matrix_involution | split_octonion")
    g.add_argument("--file", help="algebra JSON file")
    g.add_argument("--s", type=int, help="matrix size")
    g.add_argument("--n", type=int, help="dimension for zero_module / split_etale")
    g.add_argument("--kind", choices=("orthogonal", "symplectic"))
    g.add_argument("--nonunital", action="store_true", help="drop the unit op")


def _add_field(p):
    g = p.add_argument_group("field")
    g.add_argument("--p", type=int, help="characteristic")
    g.add_argument("--m", type=int, default=1, help="extension degree")
    g.add_argument("--rational", action="store_true", help="work over the rationals")


def _add_tuple(p):
    p.add_argument("--tuple", help="JSON array of coordinate vectors (or '-' for stdin)")
    p.add_argument("--tuple-file", help="file holding the JSON tuple")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "table"), default="json")
    common.add_argument("--output", help="write records here instead of stdout")
    common.add_argument("--canonical", action="store_true", help="omit timing fields")
    common.add_argument("--budget", type=lambda s: int(float(s)), help="evaluation budget (env GENBOUND_BUDGET)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1)

    ap = _Parser(prog="genbound", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_, algebra=True, field=True):
        p = sub.add_parser(name, parents=[common], help=help_)
        if algebra:
            _add_algebra(p)
        if field:
            _add_field(p)
        p.set_defaults(func=func)
        return p

    p = add("gen-test", cmd_gen_test, "close a tuple and report whether it generates")
    _add_tuple(p)
    p.add_argument("--unital-gap", action="store_true", help="also close without the unit")

    p = add("gen-min", cmd_gen_min, "smallest number of generators")
    p.add_argument("--r-max", type=int, default=4)
    p.add_argument("--randomized", action="store_true")
    p.add_argument("--trials", type=int, default=8)

    p = add("nmax", cmd_nmax, "largest proper subalgebra dimension")
    p.add_argument("--mode", choices=("formula", "exhaustive_subspaces"), default="formula")

    p = add("count", cmd_count, "exact count of tuples satisfying a predicate")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--predicate", default="nongen", help="nongen | gen | T2 | X_i:<i>")
    p.add_argument("--max-ext", type=int)

    p = add("estimate", cmd_estimate, "Monte-Carlo non-generation rate and codimension", field=False)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--q", required=True, help="field sizes, e.g. 11,101")
    p.add_argument("--samples", type=int, default=10**5)

    p = add("slope", cmd_slope, "codimension from exact counts at several q", field=False)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--q", required=True, help="field sizes, e.g. 2..5")
    p.add_argument("--predicate", default="nongen")
    p.add_argument("--max-ext", type=int)
    p.add_argument("--expected-codim", type=int)
    p.add_argument("--constant", type=int, help="sandwich constant C")

    p = add("strata", cmd_strata, "Burnside strata, rank strata, incidence counts, the slice Y", algebra=False)
    p.add_argument("--mode", choices=("xi", "t2", "y-slice", "rank", "incidence"), required=True)
    p.add_argument("--s", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--i", type=int)
    p.add_argument("--max-ext", type=int)
    p.add_argument("--enumerate", action="store_true", help="cross-check rank strata by brute force")
    _add_tuple(p)

    p = add("bounds", cmd_bounds, "generator bounds for a descriptor over a range of d", algebra=False, field=False)
    p.add_argument("--d", default="0", help="e.g. 5, 0..10 or 0,1,5")
    p.add_argument("--azumaya", metavar="s=S")
    p.add_argument("--involution", metavar="s=S,kind=K")
    p.add_argument("--octonion", nargs="?", const="")
    p.add_argument("--module", metavar="n=N")
    p.add_argument("--etale", metavar="n=N")
    p.add_argument("--generic", metavar="n=N,n_max=M,gen_k=G")
    p.add_argument("--main3", metavar="n=N,dimG=D,rho=R")

    add("sextonion", cmd_sextonion, "a 6-dimensional subalgebra of the split octonions", algebra=False)

    p = add("validate", cmd_validate, "spot-check the identities of an algebra")
    p.add_argument("--samples", type=int, default=100)

    add("export", cmd_export, "write an algebra in the JSON file format")
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.workers < 1:
            raise UsageError("--workers must be at least 1")
        _emit(args, args.func(args))
        return 0
    except BudgetExceeded as exc:
        print(f"genbound: {exc}", file=sys.stderr)
        return 2
    except (UsageError, FileNotFoundError, KeyError, ValueError) as exc:
        print(f"genbound: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
