"""Per-iteration timing of the factored and full t-SVT solver paths."""

import dataclasses
from dataclasses import dataclass

import numpy as np

from ..reference import tnn_admm
from ..solver import SolverConfig, solve
from .synthetic import SynthSpec, gen_synthetic, sample_uniform

__all__ = ["BenchRow", "bench_path", "fit_exponent", "PATHS"]

PATHS = ("factored", "full")


@dataclass(frozen=True)
class BenchRow:
    path: str
    n: int
    rank: int
    iterations: int
    per_iter: float

    def row(self):
        return (self.path, str(self.n), str(self.rank), str(self.iterations), f"{self.per_iter:.6e}")


def _one(path, n, rank, n3, c, iters, seed, cfg):
    m = gen_synthetic(SynthSpec(n, n, n3, rank, seed=seed))
    obs = sample_uniform(m, c, seed=seed + 1)
    # a subnormal eps keeps the solver from stopping early
    run = dataclasses.replace(cfg, max_iters=iters, eps=np.finfo(float).tiny, seed=seed)
    if path == "factored":
        rep = solve(obs, dataclasses.replace(run, fixed_rank=True, k_init=rank))
    elif path == "full":
        rep = tnn_admm(obs, run)
    else:
        raise ValueError(f"unknown path {path!r}; expected one of {PATHS}")
    # first iteration carries one-off costs, skip it when possible
    stamps = [0.0] + [entry.elapsed for entry in rep.log]
    steps = np.diff(stamps)[1:] if len(stamps) > 2 else np.diff(stamps)
    return float(np.median(steps)), rep.iterations


def bench_path(path, ns, rank=20, n3=3, sample_rate=0.3, iters=5, seed=0, cfg=None):
    """Median wall time of one solver iteration for every ``n`` in ``ns``."""
    cfg = cfg or SolverConfig()
    rows = []
    for n in ns:
        per_iter, done = _one(path, int(n), rank, n3, sample_rate, iters, seed, cfg)
        rows.append(BenchRow(path, int(n), rank, done, per_iter))
    return rows


def fit_exponent(ns, times):
    """Least-squares slope of ``log(time)`` against ``log(n)``."""
    ns = np.asarray(ns, dtype=np.float64)
    times = np.asarray(times, dtype=np.float64)
    if ns.size < 2 or ns.size != times.size or np.any(ns <= 0) or np.any(times <= 0):
        raise ValueError("need at least two positive (n, time) pairs")
    slope, _ = np.polyfit(np.log(ns), np.log(times), 1)
    return float(slope)
