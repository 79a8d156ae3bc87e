"""ADMM completion under the rank-bounded surrogate norm.

The iterate lives in the Fourier domain as per-slice factors
``Z̄_i`` (``n1 x k_i``) and ``Q̄_i`` (``k_i x n2``, orthonormal rows), for
slices ``0 .. n3 // 2``; the remaining slices follow by conjugate symmetry.
``solve_tcdlr`` keeps every ``k_i`` fixed, ``solve_tcdlr_re`` adapts them
with a randomized increase test and a singular-value gap decrease test.
"""

import dataclasses
import logging
import time
from dataclasses import dataclass, field

import numpy as np

from .gtsvt import FactorState, spectrum_to_tensor, threshold_matrix
from .parallel import slice_map
from .surrogate import SurrogateSpec, prox
from .tproduct import half_slices, spectral_singular_values

__all__ = [
    "Observation",
    "SolverConfig",
    "IterationLog",
    "SolverReport",
    "solve",
    "solve_tcdlr",
    "solve_tcdlr_re",
    "rank_increase",
    "rank_decrease",
    "residual_statistic",
    "decrease_target",
    "gap_ratio",
]

log = logging.getLogger(__name__)

PINV_RCOND = 1e-12
DECREASE_RATIO = 10.0
ENERGY_FRACTION = 0.95


@dataclass
class Observation:
    """Observed entries ``P_Omega(M)`` and the boolean support ``Omega``."""

    data: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        self.mask = np.asarray(self.mask, dtype=bool)
        if self.data.ndim != 3 or self.data.shape != self.mask.shape:
            raise ValueError(
                f"data {self.data.shape} and mask {self.mask.shape} must be equal 3-axis shapes"
            )
        if not np.all(np.isfinite(self.data)):
            raise ValueError("observed data has non-finite entries")
        if np.any(self.data[~self.mask] != 0):
            raise ValueError("observed data must be zero outside the mask")

    @classmethod
    def from_tensor(cls, m, mask):
        mask = np.asarray(mask, dtype=bool)
        return cls(np.where(mask, m, 0.0), mask)

    @property
    def shape(self):
        return self.data.shape


@dataclass(frozen=True)
class SolverConfig:
    """Hyperparameters. ``None`` fields are filled by :meth:`resolve`.

    ``k_max`` defaults to ``min(n1, n2) // 2``, ``l`` to
    ``max(1, min(n1, n2) // 50)``, ``sample_w`` to ``min(1000, n1 * n2)``
    and ``k_init`` to ``k_max``.

    Rank adaptation knobs (ignored when ``fixed_rank``):

    ``increase_probe``
        ``"power"`` estimates the top singular value of the standardized
        residual with ``power_iters`` power steps from the Gaussian probe;
        ``"literal"`` uses ``||p^T M||_2`` as is.
    ``residual_floor``
        No increase while ``||D||_F < residual_floor * ||C||_F``.
    ``gate_on_kept``
        No increase unless the previous thresholding kept every component
        of the slice, i.e. the rank bound was active.
    ``cooldown``
        Minimum number of iterations between two increases of one slice.
    ``decrease_on``
        Spectrum fed to the gap test: ``"raw"`` singular values of ``Z̄_i``
        or the ``"thresholded"`` ones.
    ``gap_floor``
        Never truncate below the position of the detected gap.
    ``warmup``
        No increase during the first ``warmup`` iterations.
    """

    surrogate: SurrogateSpec = field(default_factory=SurrogateSpec)
    rho: float = 1.3
    mu0: float = 1e-4
    mu_max: float = 1e14
    eps: float = 1e-9
    max_iters: int = 500
    k_init: object = None
    k_min: int = 25
    k_max: int = None
    l: int = None
    h: float = 1.0
    sample_w: int = None
    seed: int = 0
    fixed_rank: bool = False
    warmup: int = 3
    increase_probe: str = "power"
    power_iters: int = 4
    residual_floor: float = 0.1
    gate_on_kept: bool = True
    decrease_on: str = "thresholded"
    gap_floor: bool = True
    cooldown: int = 8
    threads: int = 1

    def resolve(self, shape):
        """Concrete copy for tensors of ``shape``; validates ranges."""
        n1, n2, n3 = shape
        nmin = min(n1, n2)
        k_max = self.k_max if self.k_max is not None else max(1, nmin // 2)
        l = self.l if self.l is not None else max(1, nmin // 50)
        w = self.sample_w if self.sample_w is not None else min(1000, n1 * n2)
        k_init = self.k_init if self.k_init is not None else k_max
        k_init = np.broadcast_to(np.asarray(k_init, dtype=int), (half_slices(n3),)).copy()
        k_min = min(self.k_min, k_max)
        cfg = dataclasses.replace(
            self, k_max=k_max, l=l, sample_w=min(w, n1 * n2), k_init=k_init, k_min=k_min
        )
        cfg.validate(shape)
        return cfg

    def validate(self, shape):
        n1, n2, _ = shape
        nmin = min(n1, n2)
        if not self.rho > 1:
            raise ValueError("rho must exceed 1")
        for name in ("mu0", "mu_max", "eps"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if self.increase_probe not in ("power", "literal"):
            raise ValueError("increase_probe must be 'power' or 'literal'")
        if self.decrease_on not in ("raw", "thresholded"):
            raise ValueError("decrease_on must be 'raw' or 'thresholded'")
        if self.power_iters < 1 or self.cooldown < 1 or self.warmup < 0:
            raise ValueError("need power_iters >= 1, cooldown >= 1 and warmup >= 0")
        if not 0 <= self.residual_floor < 1:
            raise ValueError("residual_floor must lie in [0, 1)")
        k = np.asarray(self.k_init)
        if np.any(k < 1) or np.any(k > nmin):
            raise ValueError(f"k_init must lie in [1, min(n1, n2)={nmin}]")
        if not self.fixed_rank:
            if not 1 <= self.k_min <= self.k_max <= nmin:
                raise ValueError(
                    f"need 1 <= k_min <= k_max <= {nmin}, got {self.k_min}, {self.k_max}"
                )
            if np.any(k < self.k_min) or np.any(k > self.k_max):
                raise ValueError(f"k_init must lie in [k_min, k_max]=[{self.k_min}, {self.k_max}]")
            if self.l < 1 or self.h < 0 or self.sample_w < 2:
                raise ValueError("need l >= 1, h >= 0 and sample_w >= 2")


@dataclass
class IterationLog:
    iteration: int
    primal_residual: float
    change_p: float
    change_e: float
    mu: float
    ranks: list
    elapsed: float
    increased: list = field(default_factory=list)
    gap_ratios: list = field(default_factory=list)


@dataclass
class SolverReport:
    recovered: np.ndarray
    iterations: int
    log: list
    termination: str
    state: FactorState
    config: SolverConfig

    @property
    def converged(self):
        return self.termination == "converged"

    @property
    def ranks(self):
        """Final per-slice ranks over all ``n3`` Fourier slices.

        Without factor state (full t-SVT runs) this counts the singular
        values of each Fourier slice above ``1e-8`` of the largest one.
        """
        if self.state is not None:
            return self.state.full_ranks
        sv = spectral_singular_values(self.recovered)
        top = sv.max(initial=0.0)
        return [int(np.count_nonzero(col > 1e-8 * top)) for col in sv.T]

    @property
    def wall_time(self):
        return self.log[-1].elapsed if self.log else 0.0


def residual_statistic(d, rng, w, probe="power", iters=4):
    """Estimate of ``sigma_1((D - mean) / std)`` from a random sample.

    The mean and standard deviation come from ``w`` entries of ``d``
    sampled without replacement. The Gaussian probe ``p`` has ``n1``
    real entries. ``"power"`` runs ``iters`` power steps from ``p``; the
    estimate never exceeds the true largest singular value.
    """
    n1, n2 = d.shape
    flat = d.reshape(-1)
    s = flat[rng.choice(flat.size, size=min(w, flat.size), replace=False)]
    mu_hat = s.mean()
    delta = np.sqrt(np.sum(np.abs(s - mu_hat) ** 2) / (s.size - 1))
    p = rng.standard_normal(n1)
    if delta == 0 or not np.isfinite(delta):
        return 0.0
    m = (d - mu_hat) / delta
    row = p @ m
    if probe == "literal":
        return float(np.linalg.norm(row))
    est = 0.0
    for _ in range(max(1, iters)):
        nx = np.linalg.norm(row)
        if nx == 0:
            return 0.0
        col = m @ (row.conj() / nx)
        est = float(np.linalg.norm(col))
        if est == 0:
            return 0.0
        row = (col.conj() / est) @ m
    return est


def rank_increase(z, q, c, cfg, rng):
    """Augment one slice's factors when the residual looks structured.

    Parameters
    ----------
    z : ndarray, (n1, k)
    q : ndarray, (k, n2), orthonormal rows
    c : ndarray, (n1, n2)
        Current Fourier slice of the ADMM target ``C``.
    cfg : SolverConfig
        Resolved configuration (uses ``l``, ``k_max``, ``h``, ``sample_w``).
    rng : numpy.random.Generator

    Returns
    -------
    z, q : ndarray
        With ``z @ q`` unchanged and ``l`` extra rows/columns when the test
        fires.
    fired : bool
    """
    n1, n2 = c.shape
    k = q.shape[0]
    if k >= cfg.k_max:
        return z, q, False
    d = c - z @ q
    if cfg.residual_floor > 0 and np.linalg.norm(d) < cfg.residual_floor * np.linalg.norm(c):
        return z, q, False
    stat = residual_statistic(d, rng, cfg.sample_w, cfg.increase_probe, cfg.power_iters)
    if stat <= np.sqrt(n1) + np.sqrt(n2) + cfg.h:
        return z, q, False
    step = min(k + cfg.l, cfg.k_max) - k
    sketch = rng.standard_normal((step, n1)) @ d
    qt, rt = np.linalg.qr(np.vstack([q, sketch]).conj().T)
    # [q; P d] = rt^H qt^H
    z_new = np.hstack([z, np.zeros((n1, step), dtype=z.dtype)]) @ rt.conj().T
    return z_new, qt.conj().T, True


def gap_ratio(lam):
    """Dominance of the largest consecutive singular value quotient.

    Returns ``(ratio, s)`` where ``s`` is the 0-based index of the largest
    quotient ``lam[s] / lam[s + 1]`` (ties to the smallest index) and
    ``ratio = (k - 1) * max / sum(other quotients)``.
    """
    lam = np.asarray(lam, dtype=np.float64)
    k = lam.size
    if k < 2 or lam[0] <= 0:
        return 0.0, 0
    safe = np.maximum(lam, lam[0] * np.finfo(float).eps)
    quot = safe[:-1] / safe[1:]
    s = int(np.argmax(quot))
    rest = quot.sum() - quot[s]
    if rest <= 0:
        return (np.inf if quot[s] > 1 else 0.0), s
    return float((k - 1) * quot[s] / rest), s


def decrease_target(lam, k_min, gap_floor=False):
    """New rank from a descending spectrum, or ``None`` if there is no gap.

    Fires when :func:`gap_ratio` is at least 10; the target is the
    smallest count holding 95% of the spectrum's sum, floored at ``k_min``.
    """
    lam = np.asarray(lam, dtype=np.float64)
    ratio, pos = gap_ratio(lam)
    if ratio < DECREASE_RATIO:
        return None
    cum = np.cumsum(lam)
    k_tilde = int(np.searchsorted(cum, ENERGY_FRACTION * cum[-1] * (1 - 1e-15)) + 1)
    target = max(k_tilde, k_min, pos + 1 if gap_floor else 0)
    return target if target < lam.size else None


def rank_decrease(z, q, cfg, lam=None):
    """Truncate one slice's factors at a sharp singular value drop.

    ``lam`` may carry the singular values of ``z`` when already known.
    The truncation is the best rank-``k`` approximation of ``z @ q``:
    QR of ``z``, SVD of the triangular factor, keep the leading block.

    Returns
    -------
    z, q : ndarray
    changed : bool
    """
    if lam is None:
        lam = np.linalg.svd(z, compute_uv=False)
    target = decrease_target(lam, cfg.k_min, cfg.gap_floor)
    if target is None:
        return z, q, False
    qz, rz = np.linalg.qr(z)
    u, s, vh = np.linalg.svd(rz)
    z_new = (qz @ u[:, :target]) * s[:target]
    q_new = vh[:target] @ q
    return z_new, q_new, True


def _init_factors(cfg, shape, rng):
    _, n2, n3 = shape
    qs = []
    for k in cfg.k_init:
        g = rng.standard_normal((int(k), n2))
        qb, _ = np.linalg.qr(g.T)
        qs.append(qb.T.astype(np.complex128))
    return qs


def solve(obs, cfg=None, callback=None):
    """Run the ADMM loop; ``cfg.fixed_rank`` picks the variant.

    ``callback(entry, x, e)`` is called after every iteration with the
    :class:`IterationLog` entry, the current estimate and the current
    ``E`` (zero on the observed entries).
    """
    if cfg is None:
        cfg = SolverConfig()
    if not isinstance(obs, Observation):
        raise TypeError("obs must be an Observation")
    if not obs.mask.any():
        raise ValueError("mask has no observed entries")
    shape = obs.shape
    n1, n2, n3 = shape
    cfg = cfg.resolve(shape)
    h = half_slices(n3)
    g = cfg.surrogate
    adaptive = not cfg.fixed_rank

    seeds = np.random.SeedSequence(cfg.seed).spawn(h + 1)
    init_rng = np.random.default_rng(seeds[0])
    slice_rngs = [np.random.default_rng(s) for s in seeds[1:]]
    qs = _init_factors(cfg, shape, init_rng)
    zs = [np.zeros((n1, q.shape[0]), dtype=np.complex128) for q in qs]
    sigmas = [np.zeros(0)] * h
    kept = [0] * h
    last_inc = [-(10**9)] * h

    m = obs.data
    mask = obs.mask
    x = m.copy()
    e = np.zeros(shape)
    y = np.zeros(shape)
    p_prev = np.zeros(shape)
    history = []
    termination = "max_iters"
    start = time.perf_counter()
    t = 0

    for t in range(cfg.max_iters):
        mu = min(cfg.mu_max, cfg.mu0 * cfg.rho**t)
        c_hat = np.fft.rfft((m - e + x + y / mu) / 2.0, axis=2)
        tau = 1.0 / mu
        grow = adaptive and t >= cfg.warmup

        def step(i):
            c = c_hat[:, :, i]
            a = c @ qs[i].conj().T
            ah = a.conj().T
            b = np.linalg.pinv(ah @ a, rcond=PINV_RCOND, hermitian=True) @ (ah @ c)
            qb, rb = np.linalg.qr(b.conj().T)
            q = qb.conj().T
            z = a @ rb.conj().T
            fired = False
            if grow and t - last_inc[i] >= cfg.cooldown and (
                not cfg.gate_on_kept or kept[i] >= q.shape[0]
            ):
                z, q, fired = rank_increase(z, q, c, cfg, slice_rngs[i])
            zt, lam = threshold_matrix(z, tau, g)
            shrunk = prox(g, lam, tau)
            x_i = zt @ q
            p_i = z @ q
            spectrum = shrunk if cfg.decrease_on == "thresholded" else lam
            # a freshly augmented slice has exact zeros at the tail of lam
            if adaptive and not fired and spectrum[0] > 0:
                z, q, _ = rank_decrease(z, q, cfg, lam=spectrum)
            nk = int(np.count_nonzero(shrunk))
            return z, q, x_i, p_i, lam, fired, gap_ratio(spectrum)[0], nk

        res = slice_map(step, range(h), cfg.threads)
        zs = [r[0] for r in res]
        qs = [r[1] for r in res]
        sigmas = [r[4] for r in res]
        kept = [r[7] for r in res]
        last_inc = [t if r[5] else li for r, li in zip(res, last_inc)]
        x = spectrum_to_tensor(np.stack([r[2] for r in res], axis=2), n3)
        p = spectrum_to_tensor(np.stack([r[3] for r in res], axis=2), n3)

        e_new = np.where(mask, 0.0, m - p + y / mu)
        resid = m - p - e_new
        y = y + mu * resid
        r_inf = float(np.abs(resid).max())
        dp = float(np.abs(p - p_prev).max())
        de = float(np.abs(e_new - e).max())
        e = e_new
        p_prev = p
        history.append(
            IterationLog(
                iteration=t + 1,
                primal_residual=r_inf,
                change_p=dp,
                change_e=de,
                mu=mu,
                ranks=[q.shape[0] for q in qs],
                increased=[bool(r[5]) for r in res],
                gap_ratios=[r[6] for r in res],
                elapsed=time.perf_counter() - start,
            )
        )
        if callback is not None:
            callback(history[-1], x, e)
        if r_inf < cfg.eps and dp < cfg.eps and de < cfg.eps:
            termination = "converged"
            break

    log.debug("stopped after %d iterations (%s)", t + 1, termination)
    state = FactorState(z=zs, q=qs, n3=n3, sigma=sigmas)
    return SolverReport(
        recovered=x,
        iterations=len(history),
        log=history,
        termination=termination,
        state=state,
        config=cfg,
    )


def solve_tcdlr(obs, cfg=None, callback=None):
    """Fixed-rank solver: every slice keeps ``k_init`` throughout."""
    cfg = dataclasses.replace(cfg or SolverConfig(), fixed_rank=True)
    return solve(obs, cfg, callback)


def solve_tcdlr_re(obs, cfg=None, callback=None):
    """Rank-estimating solver with per-slice increase and decrease."""
    cfg = dataclasses.replace(cfg or SolverConfig(), fixed_rank=False)
    return solve(obs, cfg, callback)
