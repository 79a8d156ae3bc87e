"""Phase-transition sweeps over (rank fraction, sampling rate) grids."""

import csv
import dataclasses
import time
from dataclasses import dataclass

import numpy as np

from ..solver import SolverConfig, solve
from .metrics import relerr
from .synthetic import SynthSpec, gen_synthetic, sample_uniform

__all__ = ["SweepCell", "phase_sweep", "write_csv", "CSV_COLUMNS", "SUCCESS_RELERR"]

SUCCESS_RELERR = 1e-2
CSV_COLUMNS = ("rank_fraction", "sample_rate", "mean_relerr", "success_count", "mean_time")


@dataclass(frozen=True)
class SweepCell:
    rank_fraction: float
    sample_rate: float
    mean_relerr: float
    success_count: int
    mean_time: float
    trials: int

    @property
    def success(self):
        """A cell succeeds when its mean relerr is at most ``1e-2``."""
        return self.mean_relerr <= SUCCESS_RELERR

    def row(self):
        return (
            f"{self.rank_fraction:.6g}",
            f"{self.sample_rate:.6g}",
            f"{self.mean_relerr:.6e}",
            str(self.success_count),
            f"{self.mean_time:.4f}",
        )


def _fit_cfg(cfg, n, rank):
    """Clip the rank bounds of ``cfg`` so they are valid for this cell."""
    k_max = cfg.k_max if cfg.k_max is not None else max(1, n // 2)
    k_max = min(k_max, n)
    k_min = min(cfg.k_min, k_max)
    k_init = cfg.k_init if cfg.k_init is not None else k_max
    k_init = int(np.clip(k_init, k_min, k_max)) if np.ndim(k_init) == 0 else k_init
    return dataclasses.replace(cfg, k_max=k_max, k_min=k_min, k_init=k_init)


def phase_sweep(n, rank_grid, rate_grid, trials=1, cfg=None, n3=3, seed=0, csv_path=None, progress=None):
    """Run ``trials`` seeded instances per grid cell.

    Parameters
    ----------
    n : int
        Tensors are ``n x n x n3``.
    rank_grid : sequence of float
        Tubal rank as a fraction of ``n``; the rank is ``max(1, round(f * n))``.
    rate_grid : sequence of float
        Sampling rates in ``(0, 1]``.
    cfg : SolverConfig, optional
    csv_path : path, optional
        When given, one CSV row per cell is written there.
    progress : callable, optional
        Called with each finished :class:`SweepCell`.

    Returns
    -------
    list of SweepCell
        Row-major over ``rank_grid`` then ``rate_grid``.
    """
    if len(rank_grid) == 0 or len(rate_grid) == 0:
        raise ValueError("rank_grid and rate_grid must be nonempty")
    if trials < 1:
        raise ValueError("trials must be positive")
    cfg = cfg or SolverConfig()
    cells = []
    for f in rank_grid:
        rank = max(1, int(round(f * n)))
        run_cfg = _fit_cfg(cfg, n, rank)
        for c in rate_grid:
            errs, times = [], []
            for trial in range(trials):
                s = seed + trial
                m = gen_synthetic(SynthSpec(n, n, n3, rank, c, seed=s))
                obs = sample_uniform(m, c, seed=s + 10_000)
                t0 = time.perf_counter()
                rep = solve(obs, dataclasses.replace(run_cfg, seed=s))
                times.append(time.perf_counter() - t0)
                errs.append(relerr(rep.recovered, m))
            cell = SweepCell(
                rank_fraction=float(f),
                sample_rate=float(c),
                mean_relerr=float(np.mean(errs)),
                success_count=int(sum(e <= SUCCESS_RELERR for e in errs)),
                mean_time=float(np.mean(times)),
                trials=trials,
            )
            cells.append(cell)
            if progress is not None:
                progress(cell)
    if csv_path is not None:
        write_csv(csv_path, cells)
    return cells


def write_csv(path, cells):
    with open(path, "w", newline="", encoding="ascii") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for cell in cells:
            w.writerow(cell.row())
