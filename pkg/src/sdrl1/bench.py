"""Monte Carlo experiment harness.

Two experiments at configurable scale:

* sparse grid   -- exact-recovery rate of each method over a
                   (n/N, k/n) grid of exactly sparse instances.
* compressible  -- per-trial MSE of SDRL1 vs IRL1 on power-law signals
                   for several decay exponents.

Every trial's randomness derives from (master_seed, experiment tag, grid
coordinates, trial index) through a seed sequence, so results are invariant
to execution order and worker count. Records are sorted before writing and
wall-clock columns are left empty unless timing is explicitly requested,
which makes repeated runs byte-identical.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import repeat

import numpy as np

from .reweight import Method, OuterConfig, run_irl1, run_l1, run_sdrl1
from .sensing import MeasurementSet, gen_gaussian
from .signalgen import SignalKind, SignalSpec, gen_compressible, gen_sparse
from .wbpdn import InfeasibleError

__all__ = [
    "CSV_HEADER",
    "SCHEMA_VERSION",
    "CompressibleConfig",
    "SparseGridConfig",
    "TrialRecord",
    "aggregate_sparse",
    "exact_recovery",
    "mse",
    "mse_ratios",
    "run_compressible",
    "run_sparse_grid",
    "write_records_csv",
    "write_summary_json",
]

SCHEMA_VERSION = 1
CSV_HEADER = "experiment,method,N,n,k,p,trial,seed,exact,rel_err,mse,outer_iters,wall_ms"

# Experiment tags folded into the per-trial seed derivation.
_SPARSE_TAG = 1
_COMPRESSIBLE_TAG = 2

_RUNNERS = {Method.L1: run_l1, Method.IRL1: run_irl1, Method.SDRL1: run_sdrl1}


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class SparseGridConfig:
    N: int = 2000
    n_fractions: tuple[float, ...] = (0.1, 0.25, 0.5)
    k_over_n: tuple[float, ...] = (0.1, 0.2, 0.3, 0.4, 0.5)
    trials: int = 100
    master_seed: int = 0
    recovery_tol: float = 1e-3
    methods: tuple[Method, ...] = (Method.L1, Method.IRL1, Method.SDRL1)
    outer: OuterConfig = field(default_factory=OuterConfig)

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("N must be at least 2")
        for f in tuple(self.n_fractions) + tuple(self.k_over_n):
            if not 0.0 < f <= 1.0:
                raise ValueError("fractions must lie in (0, 1]")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.recovery_tol <= 0:
            raise ValueError("recovery_tol must be positive")
        if not self.methods or not set(self.methods) <= set(Method):
            raise ValueError("methods must be a nonempty subset of Method")


@dataclass(frozen=True)
class CompressibleConfig:
    N: int = 2000
    n_over_N: float = 0.1
    p_values: tuple[float, ...] = (1.1, 1.5, 2.0)
    trials: int = 100
    master_seed: int = 0
    outer: OuterConfig = field(default_factory=OuterConfig)

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("N must be at least 2")
        if not 0.0 < self.n_over_N <= 1.0:
            raise ValueError("n_over_N must lie in (0, 1]")
        for p in self.p_values:
            if p <= 1.0:
                raise ValueError("decay exponents must exceed 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


@dataclass(frozen=True)
class TrialRecord:
    experiment: str
    method: str
    N: int
    n: int
    k: int | None
    p: float | None
    trial: int
    seed: int
    exact: bool
    rel_err: float
    mse: float
    outer_iters: int
    wall_time: float | None = None  # seconds; None when timing is off

    def sort_key(self):
        return (
            self.experiment,
            self.N,
            self.n,
            -1 if self.k is None else self.k,
            -1.0 if self.p is None else self.p,
            self.trial,
            self.method,
        )


def exact_recovery(x_hat, x, tol: float) -> bool:
    """Relative l2 error ||x_hat - x|| / ||x|| <= tol (inclusive)."""
    x_hat = np.asarray(x_hat, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if x_hat.shape != x.shape:
        raise ValueError("signals must have the same length")
    denom = float(np.linalg.norm(x))
    if denom == 0.0:
        raise ValueError("recovery criterion undefined for the zero signal")
    return float(np.linalg.norm(x_hat - x)) / denom <= tol


def mse(x_hat, x) -> float:
    """Mean squared error ||x_hat - x||^2 / N."""
    x_hat = np.asarray(x_hat, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if x_hat.shape != x.shape:
        raise ValueError("signals must have the same length")
    d = x_hat - x
    return float(np.dot(d, d)) / x.size


def _trial_seeds(master_seed: int, tag: int, coords: tuple[int, ...]):
    """(csv seed, matrix seed, signal seed) for one trial, stable across
    platforms and execution order."""
    ss = np.random.SeedSequence((master_seed, tag) + coords)
    s = ss.generate_state(3, dtype=np.uint64)
    return int(s[0]), int(s[1]), int(s[2])


def _run_methods(A, m, outer, methods, N, timing, make_record):
    records = []
    for method in methods:
        t0 = time.perf_counter()
        try:
            res = _RUNNERS[method](A, m, outer)
            x_hat = res.solution
            outer_iters = res.outer_iterations
        except (InfeasibleError, np.linalg.LinAlgError):
            # hard solver failure: record a miss, keep sweeping
            x_hat = np.zeros(N)
            outer_iters = 0
        wall = time.perf_counter() - t0 if timing else None
        records.append(make_record(method, x_hat, outer_iters, wall))
    return records


def _sparse_trial(cfg: SparseGridConfig, fi: int, ki: int, trial: int, timing: bool):
    N = cfg.N
    n = max(1, _round_half_up(cfg.n_fractions[fi] * N))
    k = max(1, _round_half_up(cfg.k_over_n[ki] * n))
    seed_col, a_seed, x_seed = _trial_seeds(cfg.master_seed, _SPARSE_TAG, (fi, ki, trial))
    A = gen_gaussian(n, N, seed=a_seed)
    x = gen_sparse(SignalSpec(kind=SignalKind.SPARSE, N=N, k=k, seed=x_seed))
    m = MeasurementSet(A.entries @ x, 0.0)

    def make_record(method, x_hat, outer_iters, wall):
        rel = float(np.linalg.norm(x_hat - x) / np.linalg.norm(x))
        return TrialRecord(
            experiment="sparse-grid",
            method=method.value,
            N=N,
            n=n,
            k=k,
            p=None,
            trial=trial,
            seed=seed_col,
            exact=rel <= cfg.recovery_tol,
            rel_err=rel,
            mse=mse(x_hat, x),
            outer_iters=outer_iters,
            wall_time=wall,
        )

    return _run_methods(A, m, cfg.outer, cfg.methods, N, timing, make_record)


def _compressible_trial(cfg: CompressibleConfig, pi: int, trial: int, timing: bool):
    N = cfg.N
    n = max(1, _round_half_up(cfg.n_over_N * N))
    p = cfg.p_values[pi]
    seed_col, a_seed, x_seed = _trial_seeds(
        cfg.master_seed, _COMPRESSIBLE_TAG, (pi, trial)
    )
    A = gen_gaussian(n, N, seed=a_seed)
    x = gen_compressible(SignalSpec(kind=SignalKind.COMPRESSIBLE, N=N, p=p, seed=x_seed))
    m = MeasurementSet(A.entries @ x, 0.0)

    def make_record(method, x_hat, outer_iters, wall):
        rel = float(np.linalg.norm(x_hat - x) / np.linalg.norm(x))
        return TrialRecord(
            experiment="compressible",
            method=method.value,
            N=N,
            n=n,
            k=None,
            p=p,
            trial=trial,
            seed=seed_col,
            exact=rel <= 1e-3,
            rel_err=rel,
            mse=mse(x_hat, x),
            outer_iters=outer_iters,
            wall_time=wall,
        )

    return _run_methods(
        A, m, cfg.outer, (Method.SDRL1, Method.IRL1), N, timing, make_record
    )


def _run_tasks(fn, cfg, coords, workers: int, timing: bool):
    if workers <= 1:
        batches = [fn(cfg, *c, timing) for c in coords]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            batches = list(
                pool.map(
                    fn,
                    repeat(cfg),
                    *zip(*coords),
                    repeat(timing),
                    chunksize=max(1, len(coords) // (4 * workers)),
                )
            )
    records = [rec for batch in batches for rec in batch]
    records.sort(key=TrialRecord.sort_key)
    return records


def run_sparse_grid(
    cfg: SparseGridConfig, workers: int = 1, timing: bool = False
) -> list[TrialRecord]:
    """All (n fraction, k/n, trial) combinations; every method sees the same
    (A, x, y) instance within a trial. Output is sorted, independent of
    worker count."""
    coords = [
        (fi, ki, t)
        for fi in range(len(cfg.n_fractions))
        for ki in range(len(cfg.k_over_n))
        for t in range(cfg.trials)
    ]
    return _run_tasks(_sparse_trial, cfg, coords, workers, timing)


def run_compressible(
    cfg: CompressibleConfig, workers: int = 1, timing: bool = False
) -> list[TrialRecord]:
    """SDRL1 and IRL1 on identical power-law instances for each decay
    exponent; noiseless measurements, equality-constrained solves."""
    coords = [(pi, t) for pi in range(len(cfg.p_values)) for t in range(cfg.trials)]
    return _run_tasks(_compressible_trial, cfg, coords, workers, timing)


def _fmt_float(x) -> str:
    return "" if x is None else "%.17g" % x


def write_records_csv(records, path) -> None:
    """One row per record under the fixed header; floats carry 17
    significant digits; empty cells for fields a record does not have."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(CSV_HEADER.split(","))
        for r in records:
            w.writerow(
                [
                    r.experiment,
                    r.method,
                    r.N,
                    r.n,
                    "" if r.k is None else r.k,
                    _fmt_float(r.p),
                    r.trial,
                    r.seed,
                    int(r.exact),
                    _fmt_float(r.rel_err),
                    _fmt_float(r.mse),
                    r.outer_iters,
                    "" if r.wall_time is None else _fmt_float(r.wall_time * 1e3),
                ]
            )


def aggregate_sparse(records) -> list[dict]:
    """Per (n, k, method) aggregates of sparse-grid records: trial count,
    recovery rate, mean MSE."""
    groups: dict[tuple, list[TrialRecord]] = {}
    for r in records:
        if r.experiment != "sparse-grid":
            continue
        groups.setdefault((r.n, r.k, r.method), []).append(r)
    out = []
    for (n, k, method), recs in sorted(groups.items()):
        out.append(
            {
                "n": n,
                "k": k,
                "method": method,
                "trials": len(recs),
                "recovery_rate": sum(r.exact for r in recs) / len(recs),
                "mean_mse": sum(r.mse for r in recs) / len(recs),
            }
        )
    return out


def mse_ratios(
    records, numerator: str = "sdrl1", denominator: str = "irl1"
) -> dict[float, tuple[list[float], int]]:
    """Per-trial MSE ratios numerator/denominator keyed by decay exponent,
    plus the count of trials excluded for a zero denominator."""
    num: dict[tuple, float] = {}
    den: dict[tuple, float] = {}
    for r in records:
        if r.experiment != "compressible":
            continue
        if r.method == numerator:
            num[(r.p, r.trial)] = r.mse
        if r.method == denominator:
            den[(r.p, r.trial)] = r.mse
    out: dict[float, tuple[list[float], int]] = {}
    for key in sorted(num):
        if key not in den:
            continue
        p = key[0]
        ratios, excluded = out.get(p, ([], 0))
        if den[key] == 0.0:
            excluded += 1
        else:
            ratios.append(num[key] / den[key])
        out[p] = (ratios, excluded)
    return out


def _jsonable(obj):
    if isinstance(obj, enum.Enum):
        return obj.value
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {k: _jsonable(v) for k, v in dataclasses.asdict(obj).items()}
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def write_summary_json(cfg, records, path) -> None:
    """Aggregate summary with schema version and the effective config."""
    is_sparse = isinstance(cfg, SparseGridConfig)
    summary = {
        "schema_version": SCHEMA_VERSION,
        "experiment": "sparse-grid" if is_sparse else "compressible",
        "config": _jsonable(cfg),
        "records": len(records),
    }
    if is_sparse:
        summary["points"] = aggregate_sparse(records)
    else:
        points = []
        for p, (ratios, excluded) in sorted(mse_ratios(records).items()):
            ratios = sorted(ratios)
            points.append(
                {
                    "p": p,
                    "trials": len(ratios) + excluded,
                    "undefined_ratios": excluded,
                    "median_mse_ratio": (
                        None if not ratios else float(np.median(ratios))
                    ),
                    "ratios": ratios,
                }
            )
        summary["points"] = points
    with open(path, "w") as f:
        json.dump(summary, f, indent=2, sort_keys=True)
        f.write("\n")
