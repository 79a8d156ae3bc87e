"""Nonconvex surrogates of the l0 penalty and their scalar proximal maps.

Every surrogate ``g`` here is nondecreasing on ``[0, inf)`` and its
derivative is a completely monotone function (positive, decreasing,
convex). The prox objective ``f(x) = (x - sigma)**2 / 2 + tau * g(x)``
therefore has a convex stationarity function ``h(x) = x - sigma + tau * g'(x)``,
which has at most two roots. The larger root, when it exists, is the only
interior local minimizer, and the global minimizer is found by comparing it
against ``x = 0``.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["KINDS", "SurrogateSpec", "prox", "soft_threshold"]

KINDS = ("identity", "lp", "geman", "laplace", "log", "logarithm", "etp")

_NEWTON_ITERS = 200
_XTOL = 1e-12


@dataclass(frozen=True)
class SurrogateSpec:
    """A penalty ``g`` with its parameters.

    Parameters
    ----------
    kind : str
        One of ``KINDS``.
    p : float
        Exponent of the ``lp`` kind, in ``(0, 1]``.
    gamma : float
        Shape parameter of the gamma-parameterized kinds, ``> 0``.
    """

    kind: str = "lp"
    p: float = 0.8
    gamma: float = 1.0

    def __post_init__(self):
        kind = self.kind.lower()
        object.__setattr__(self, "kind", kind)
        if kind not in KINDS:
            raise ValueError(f"unknown surrogate kind {self.kind!r}; expected one of {KINDS}")
        if kind == "lp" and not 0.0 < self.p <= 1.0:
            raise ValueError(f"lp exponent must lie in (0, 1], got {self.p}")
        if not (np.isfinite(self.gamma) and self.gamma > 0):
            raise ValueError(f"gamma must be positive, got {self.gamma}")

    @classmethod
    def identity(cls):
        return cls("identity")

    def value(self, x):
        """Evaluate ``g(x)`` for ``x >= 0``."""
        x = np.asarray(x, dtype=np.float64)
        if np.any(x < 0):
            raise ValueError("surrogate argument must be nonnegative")
        k, g = self.kind, self.gamma
        if k == "identity":
            return x.copy()
        if k == "lp":
            return x**self.p
        if k == "geman":
            return x / (x + g)
        if k == "laplace":
            return -np.expm1(-x / g)
        if k == "log":
            return np.log(g + x)
        if k == "logarithm":
            return np.log1p(g * x) / np.log1p(g)
        # etp
        return np.expm1(-g * x) / np.expm1(-g)

    def deriv(self, x):
        """Evaluate ``g'(x)`` for ``x > 0``."""
        x = np.asarray(x, dtype=np.float64)
        if np.any(x < 0):
            raise ValueError("surrogate argument must be nonnegative")
        k, g = self.kind, self.gamma
        if k == "identity":
            return np.ones_like(x)
        if k == "lp":
            with np.errstate(divide="ignore"):
                return self.p * x ** (self.p - 1.0)
        if k == "geman":
            return g / (x + g) ** 2
        if k == "laplace":
            return np.exp(-x / g) / g
        if k == "log":
            return 1.0 / (g + x)
        if k == "logarithm":
            return g / ((g * x + 1.0) * np.log1p(g))
        return -g * np.exp(-g * x) / np.expm1(-g)

    def deriv2(self, x):
        """Second derivative ``g''(x)`` for ``x > 0`` (nonpositive)."""
        x = np.asarray(x, dtype=np.float64)
        k, g = self.kind, self.gamma
        if k == "identity":
            return np.zeros_like(x)
        if k == "lp":
            with np.errstate(divide="ignore"):
                return self.p * (self.p - 1.0) * x ** (self.p - 2.0)
        if k == "geman":
            return -2.0 * g / (x + g) ** 3
        if k == "laplace":
            return -np.exp(-x / g) / g**2
        if k == "log":
            return -1.0 / (g + x) ** 2
        if k == "logarithm":
            return -(g**2) / ((g * x + 1.0) ** 2 * np.log1p(g))
        return g**2 * np.exp(-g * x) / np.expm1(-g)

    def objective(self, x, sigma, tau):
        x = np.asarray(x, dtype=np.float64)
        return 0.5 * (x - sigma) ** 2 + tau * self.value(x)

    def prox(self, sigma, tau):
        return prox(self, sigma, tau)


def soft_threshold(sigma, tau):
    return np.maximum(np.asarray(sigma, dtype=np.float64) - tau, 0.0)


def prox(g, sigma, tau):
    """Global minimizer of ``(x - sigma)**2 / 2 + tau * g(x)`` over ``x >= 0``.

    Vectorized over ``sigma``. Ties between ``0`` and an interior point
    resolve to ``0``.

    Parameters
    ----------
    g : SurrogateSpec
    sigma : array_like
        Nonnegative, finite.
    tau : float
        Nonnegative, finite.

    Returns
    -------
    ndarray
        Same shape as ``sigma``; satisfies ``0 <= x <= sigma``.
    """
    sigma = np.asarray(sigma, dtype=np.float64)
    tau = float(tau)
    if not np.all(np.isfinite(sigma)) or not np.isfinite(tau):
        raise ValueError("prox inputs must be finite")
    if np.any(sigma < 0) or tau < 0:
        raise ValueError("prox inputs must be nonnegative")
    if tau == 0.0:
        return sigma.copy()
    if g.kind == "identity":
        return soft_threshold(sigma, tau)

    scalar = sigma.ndim == 0
    s = np.atleast_1d(sigma).ravel()
    out = np.zeros_like(s)
    live = s > 0
    if np.any(live):
        out[live] = _prox_positive(g, s[live], tau)
    out = out.reshape(np.shape(sigma))
    return out[()] if scalar else out


def _stationarity_argmin(g, tau):
    """Unconstrained minimizer of the convex ``h``: solves ``1 + tau * g''(x) = 0``."""
    k, gm = g.kind, g.gamma
    with np.errstate(divide="ignore", invalid="ignore"):
        if k == "lp":
            return (tau * g.p * (1.0 - g.p)) ** (1.0 / (2.0 - g.p))
        if k == "geman":
            return np.cbrt(2.0 * gm * tau) - gm
        if k == "laplace":
            return gm * np.log(tau / gm**2)
        if k == "log":
            return np.sqrt(tau) - gm
        if k == "logarithm":
            return (np.sqrt(tau * gm**2 / np.log1p(gm)) - 1.0) / gm
        return -np.log(-np.expm1(-gm) / (tau * gm**2)) / gm


def _prox_positive(g, s, tau):
    xm = np.clip(_stationarity_argmin(g, tau), 0.0, s)
    # h(0+) for the finite-slope kinds when the minimizer sits at the origin
    probe = np.where(xm > 0, xm, np.minimum(s, 1e-300))
    hm = probe - s + tau * g.deriv(probe)

    cand = np.zeros_like(s)
    has_root = hm < 0
    if np.any(has_root):
        cand[has_root] = _increasing_root(g, s[has_root], tau, probe[has_root])
    f_cand = g.objective(cand, s, tau)
    f_zero = g.objective(np.zeros_like(s), s, tau)
    return np.where(has_root & (f_cand < f_zero), cand, 0.0)


def _increasing_root(g, s, tau, left):
    """Root of ``h`` on ``[left, s]`` where ``h(left) < 0 <= h(s)``.

    Safeguarded Newton: a Newton step is kept when it lands inside
    the current bracket, otherwise the bracket midpoint is used.
    """
    lo = left.copy()
    hi = s.copy()
    # h is convex and increasing here: Newton from the right end descends monotonically
    x = s.copy()
    width = _XTOL * np.maximum(s, 1.0) * 1e-2
    for _ in range(_NEWTON_ITERS):
        hx = x - s + tau * g.deriv(x)
        neg = hx < 0
        lo = np.where(neg, x, lo)
        hi = np.where(neg, hi, x)
        dh = 1.0 + tau * g.deriv2(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = x - hx / dh
        ok = np.isfinite(newton) & (newton >= lo) & (newton <= hi)
        step = np.where(ok, newton, 0.5 * (lo + hi))
        if np.all((np.abs(step - x) <= width) | (hx == 0)):
            x = np.where(hx == 0, x, step)
            break
        x = step
    return x
