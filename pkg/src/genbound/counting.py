"""Exact and Monte-Carlo point counts of the non-generating locus.

Exhaustive counts enumerate F_q^(r n) in lexicographic order of the base-q
digits of the tuple index.  The index range is cut into fixed chunks that are
handed to worker processes, so the exact integer total does not depend on the
number of workers.  Monte-Carlo draws come from a Philox generator keyed by
(seed, chunk index); with a fixed chunk size the samples, and hence the
estimate, are the same for any worker count.
"""
from __future__ import annotations

import csv
import io
import json
import math
import multiprocessing as mp
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field as dc_field

import numpy as np

from .algebra import AlgebraSpec
from .errors import BudgetExceeded, UsageError
from .generation import budget_from_env, generates_batch, index_to_tuples
from .strata import in_T2_batch, in_X_i_batch

COUNT_CHUNK = 1 << 14
MC_CHUNK = 1 << 14
WILSON_Z = 1.959963984540054


def parse_predicate(pred) -> tuple:
    """Normalise "nongen", "gen", "T2", "X_i:2", "X2" or ("X_i", 2)."""
    if isinstance(pred, tuple):
        name, *rest = pred
        pred = f"{name}:{rest[0]}" if rest else name
    p = str(pred).strip()
    if p in ("nongen", "gen", "T2"):
        return (p, None)
    for prefix in ("X_i:", "X_", "X"):
        if p.startswith(prefix) and p[len(prefix):].isdigit():
            return ("X_i", int(p[len(prefix):]))
    raise UsageError(f"unknown predicate {pred!r}; use nongen, gen, T2 or X_i:<i>")


def predicate_label(pred) -> str:
    name, i = parse_predicate(pred)
    return name if i is None else f"X_{i}"


def evaluate_predicate(alg: AlgebraSpec, T, pred, max_ext_degree=None):
    """Boolean mask of the predicate on a (B, r, n) batch."""
    name, i = parse_predicate(pred)
    if name == "gen":
        return generates_batch(alg, T)
    if name == "nongen":
        return ~generates_batch(alg, T)
    if alg.preset not in ("matrix", "matrix_involution"):
        raise UsageError(f"predicate {predicate_label(pred)} needs a matrix preset")
    s = alg.metadata["s"]
    M = T.reshape(T.shape[0], T.shape[1], s, s)
    if name == "T2":
        return in_T2_batch(alg.field, M, max_ext_degree)
    return in_X_i_batch(alg.field, M, i, max_ext_degree)


@dataclass(frozen=True)
class CountResult:
    algebra: str
    q: int
    r: int
    predicate: str
    count: int
    total: int
    workers: int = 1
    elapsed_ms: float = dc_field(default=0.0, compare=False)

    def record(self, canonical: bool = False) -> dict:
        d = asdict(self)
        if canonical:
            d.pop("elapsed_ms")
        return d


# worker processes inherit the job through fork; only index ranges travel
_JOB: dict = {}


def _count_range(bounds):
    lo, hi = bounds
    alg, r, pred, ext = _JOB["alg"], _JOB["r"], _JOB["pred"], _JOB["ext"]
    T = index_to_tuples(alg.field, np.arange(lo, hi, dtype=np.int64), r, alg.n)
    return int(np.count_nonzero(evaluate_predicate(alg, T, pred, ext)))


def _mc_chunk(c):
    alg, r, seed, samples = _JOB["alg"], _JOB["r"], _JOB["seed"], _JOB["samples"]
    size = min(MC_CHUNK, samples - c * MC_CHUNK)
    rng = np.random.Generator(np.random.Philox(key=np.array([seed, c], dtype=np.uint64)))
    T = alg.field.random(rng, (size, r, alg.n))
    return int(np.count_nonzero(~generates_batch(alg, T)))


def _run(func, tasks, workers: int):
    if workers <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers, mp_context=mp.get_context("fork")) as ex:
        return list(ex.map(func, tasks))


def count_exhaustive(alg: AlgebraSpec, r: int, predicate="nongen", workers: int = 1,
                     budget=None, max_ext_degree=None, chunk: int = COUNT_CHUNK) -> CountResult:
    """Exact number of r-tuples over F_q satisfying the predicate."""
    F = alg.field
    if not F.is_finite:
        raise UsageError("exhaustive counts need a finite field")
    if workers < 1:
        raise UsageError("workers must be at least 1")
    if r < 0:
        raise UsageError("r must be nonnegative")
    label = predicate_label(predicate)
    total = F.q ** (r * alg.n)
    budget = budget_from_env(budget)
    if total > budget:
        raise BudgetExceeded(total, budget, "closures")
    t0 = time.perf_counter()
    _JOB.clear()
    _JOB.update(alg=alg, r=r, pred=predicate, ext=max_ext_degree)
    tasks = [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]
    count = sum(_run(_count_range, tasks, workers))
    ms = (time.perf_counter() - t0) * 1e3
    return CountResult(alg.name, F.q, r, label, count, total, workers, ms)


# ----------------------------------------------------------------------------
# Monte Carlo

def wilson_interval(k: int, n: int, z: float = WILSON_Z) -> tuple:
    if n <= 0:
        raise UsageError("Wilson interval needs at least one sample")
    p = k / n
    den = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / den
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    lo = 0.0 if k == 0 else max(0.0, centre - half)
    hi = 1.0 if k == n else min(1.0, centre + half)
    return lo, hi


@dataclass(frozen=True)
class MCResult:
    algebra: str
    q: int
    r: int
    predicate: str
    count: int
    samples: int
    p_hat: float
    interval: tuple
    seed: int
    workers: int = 1
    elapsed_ms: float = dc_field(default=0.0, compare=False)

    def record(self, canonical: bool = False) -> dict:
        d = asdict(self)
        d["interval"] = list(self.interval)
        if canonical:
            d.pop("elapsed_ms")
        return d


def monte_carlo(alg: AlgebraSpec, r: int, samples: int, seed: int = 0, workers: int = 1) -> MCResult:
    """Estimate the probability that a uniform r-tuple fails to generate."""
    F = alg.field
    if not F.is_finite:
        raise UsageError("Monte-Carlo counts need a finite field")
    if samples <= 0:
        raise UsageError("samples must be positive")
    if seed < 0:
        raise UsageError("seed must be nonnegative")
    if workers < 1:
        raise UsageError("workers must be at least 1")
    t0 = time.perf_counter()
    _JOB.clear()
    _JOB.update(alg=alg, r=r, seed=int(seed), samples=int(samples))
    chunks = list(range(-(-samples // MC_CHUNK)))
    k = sum(_run(_mc_chunk, chunks, workers))
    ms = (time.perf_counter() - t0) * 1e3
    return MCResult(alg.name, F.q, r, "nongen", k, samples, k / samples,
                    wilson_interval(k, samples), int(seed), workers, ms)


# ----------------------------------------------------------------------------
# codimension estimates

@dataclass(frozen=True)
class CodimEstimate:
    method: str
    c_hat: float
    inputs: tuple
    note: str
    interval: tuple | None = None
    sandwich: tuple | None = None

    def record(self) -> dict:
        d = asdict(self)
        d["inputs"] = [list(x) for x in self.inputs]
        if self.interval is not None:
            d["interval"] = list(self.interval)
        if self.sandwich is not None:
            d["sandwich"] = [dict(x) for x in self.sandwich]
        return d


def matrix_sandwich_constant(s: int) -> int:
    """C = s 2^s: one factor per stratum X_0, ..., X_{s-1} times 2^s."""
    return s * 2 ** s


def codim_exact_slope(counts, expected_codim=None, constant=None) -> CodimEstimate:
    """Two-point slope of log |Z_r(F_q)| using the two largest q.

    With ``expected_codim`` c the sandwich q^(rn-c) <= count <= C q^(rn-c) is
    checked at every q; ``constant`` is C.
    """
    counts = list(counts)
    qs = [c.q for c in counts]
    if len(set(qs)) < 2:
        raise UsageError("slope estimate needs counts at two distinct q")
    if len({(c.algebra, c.r, c.predicate) for c in counts}) != 1:
        raise UsageError("counts must share algebra, r and predicate")
    if any(c.count == 0 for c in counts):
        raise UsageError("a zero count leaves the slope undefined")
    c1, c2 = sorted(counts, key=lambda c: c.q)[-2:]
    rn = round(math.log(c2.total) / math.log(c2.q))
    slope = math.log(c2.count / c1.count) / math.log(c2.q / c1.q)
    sandwich = None
    if expected_codim is not None:
        dim = rn - expected_codim
        C = 1 if constant is None else constant
        sandwich = tuple(
            (("q", c.q), ("lower", c.q ** dim), ("count", c.count), ("upper", C * c.q ** dim),
             ("holds", c.q ** dim <= c.count <= C * c.q ** dim))
            for c in sorted(counts, key=lambda c: c.q))
    inputs = tuple((c.q, c.count, c.total) for c in sorted(counts, key=lambda c: c.q))
    note = f"slope from q = {c1.q}, {c2.q}; exact counts, no sampling error"
    return CodimEstimate("exact_slope", rn - slope, inputs, note, None, sandwich)


def codim_from_mc(est1: MCResult, est2: MCResult) -> CodimEstimate:
    """c_hat = log(p_1 / p_2) / log(q_2 / q_1) for q_1 < q_2, with the
    interval obtained from the Wilson endpoints."""
    a, b = sorted((est1, est2), key=lambda e: e.q)
    if a.q == b.q:
        raise UsageError("estimates must be at distinct q")
    if a.p_hat <= 0 or b.p_hat <= 0:
        raise UsageError("a zero estimate leaves the codimension undefined")
    L = math.log(b.q / a.q)
    c = math.log(a.p_hat / b.p_hat) / L
    lo = math.log(a.interval[0] / b.interval[1]) / L if a.interval[0] > 0 else -math.inf
    hi = math.log(a.interval[1] / b.interval[0]) / L if b.interval[0] > 0 else math.inf
    inputs = ((a.q, a.p_hat, a.samples), (b.q, b.p_hat, b.samples))
    note = "95% Wilson intervals propagated through the slope"
    return CodimEstimate("monte_carlo", c, inputs, note, (lo, hi))


# ----------------------------------------------------------------------------
# output

def to_json(record: dict, config: dict | None = None) -> str:
    d = dict(record)
    if config is not None:
        d["config"] = config
    return json.dumps(d, sort_keys=True, default=_jsonable)


def _jsonable(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    return str(x)


def to_csv(records) -> str:
    records = [dict(r) for r in records]
    keys = sorted({k for r in records for k in r})
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow({k: json.dumps(v, sort_keys=True, default=_jsonable) if isinstance(v, (list, dict, tuple))
                    else v for k, v in r.items()})
    return buf.getvalue()
