"""Slow oracles: explicit block-circulant t-product and a full t-SVT solver.

Nothing here is meant for production sizes; hard size guards make an
accidental large call fail fast.
"""

import dataclasses
import time

import numpy as np

from .gtsvt import gtsvt_full
from .solver import IterationLog, Observation, SolverConfig, SolverReport
from .surrogate import SurrogateSpec
from .tproduct import as_tensor

__all__ = ["bcirc", "unfold", "fold", "tprod_bcirc", "solve_tnn", "tnn_admm", "BCIRC_MAX_SIZE", "TNN_MAX_SHAPE"]

BCIRC_MAX_SIZE = 10**6
TNN_MAX_SHAPE = (200, 200, 5)


def bcirc(a):
    """Block-circulant matrix of shape ``(n1 * n3, n2 * n3)``.

    Block ``(i, j)`` is frontal slice ``(i - j) mod n3``.
    """
    a = as_tensor(a)
    n1, n2, n3 = a.shape
    out = np.empty((n1 * n3, n2 * n3))
    for i in range(n3):
        for j in range(n3):
            out[i * n1 : (i + 1) * n1, j * n2 : (j + 1) * n2] = a[:, :, (i - j) % n3]
    return out


def unfold(a):
    """Stack frontal slices vertically: ``(n1 * n3, n2)``."""
    a = as_tensor(a)
    return np.concatenate([a[:, :, i] for i in range(a.shape[2])], axis=0)


def fold(m, n3):
    """Inverse of :func:`unfold`."""
    m = np.asarray(m)
    n1 = m.shape[0] // n3
    return np.stack([m[i * n1 : (i + 1) * n1] for i in range(n3)], axis=2)


def tprod_bcirc(a, b):
    """t-product as ``fold(bcirc(a) @ unfold(b))``, built literally.

    Raises
    ------
    ValueError
        On a dimension mismatch, or when the dense block-circulant matrix
        would exceed ``BCIRC_MAX_SIZE`` entries.
    """
    a = as_tensor(a, "a")
    b = as_tensor(b, "b")
    n1, k, n3 = a.shape
    if b.shape[0] != k or b.shape[2] != n3:
        raise ValueError(f"t-product dimension mismatch: {a.shape} * {b.shape}")
    if n1 * k * n3 * n3 > BCIRC_MAX_SIZE:
        raise ValueError(f"bcirc of shape {a.shape} exceeds the oracle size guard")
    return fold(bcirc(a) @ unfold(b), n3)


def solve_tnn(obs, cfg=None, callback=None):
    """Tensor nuclear norm completion by ADMM with a full t-SVT per iteration.

    Solves ``min ||X||_TNN  s.t.  P_Omega(X) = P_Omega(M)`` with the
    splitting ``X + E = P_Omega(M)``, ``P_Omega(E) = 0``. Uses ``rho``,
    ``mu0``, ``mu_max``, ``eps``, ``max_iters`` and ``threads`` from ``cfg``;
    the surrogate is always the identity.
    """
    if isinstance(obs, Observation) and any(
        s > lim for s, lim in zip(obs.shape, TNN_MAX_SHAPE)
    ):
        raise ValueError(f"shape {obs.shape} exceeds the reference solver guard {TNN_MAX_SHAPE}")
    return tnn_admm(obs, cfg, callback)


def tnn_admm(obs, cfg=None, callback=None):
    """:func:`solve_tnn` without the size guard, for timing runs."""
    if cfg is None:
        cfg = SolverConfig()
    if not isinstance(obs, Observation):
        raise TypeError("obs must be an Observation")
    if not obs.mask.any():
        raise ValueError("mask has no observed entries")
    shape = obs.shape
    # rank bounds play no part in the full t-SVT iteration
    cfg = dataclasses.replace(cfg, fixed_rank=True, k_init=None).resolve(shape)
    g = SurrogateSpec.identity()
    m = obs.data
    mask = obs.mask
    e = np.zeros(shape)
    y = np.zeros(shape)
    x_prev = np.zeros(shape)
    history = []
    termination = "max_iters"
    start = time.perf_counter()
    x = m.copy()
    for t in range(cfg.max_iters):
        mu = min(cfg.mu_max, cfg.mu0 * cfg.rho**t)
        x = gtsvt_full(m - e + y / mu, 1.0 / mu, g, threads=cfg.threads)
        e_new = np.where(mask, 0.0, m - x + y / mu)
        resid = m - x - e_new
        y = y + mu * resid
        r_inf = float(np.abs(resid).max())
        dx = float(np.abs(x - x_prev).max())
        de = float(np.abs(e_new - e).max())
        e = e_new
        x_prev = x
        history.append(
            IterationLog(
                iteration=t + 1,
                primal_residual=r_inf,
                change_p=dx,
                change_e=de,
                mu=mu,
                ranks=[],
                elapsed=time.perf_counter() - start,
            )
        )
        if callback is not None:
            callback(history[-1], x, e)
        if r_inf < cfg.eps and dx < cfg.eps and de < cfg.eps:
            termination = "converged"
            break
    return SolverReport(
        recovered=x,
        iterations=len(history),
        log=history,
        termination=termination,
        state=None,
        config=cfg,
    )
