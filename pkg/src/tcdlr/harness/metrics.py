"""Recovery quality metrics."""

from dataclasses import dataclass

import numpy as np

__all__ = ["Metrics", "relerr", "psnr"]


@dataclass(frozen=True)
class Metrics:
    relerr: float
    psnr: float
    wall_time: float
    iterations: int

    def as_pairs(self):
        return [
            ("relerr", f"{self.relerr:.6e}"),
            ("psnr", f"{self.psnr:.4f}"),
            ("wall_time", f"{self.wall_time:.3f}"),
            ("iterations", str(self.iterations)),
        ]


def _pair(xhat, m):
    xhat = np.asarray(xhat, dtype=np.float64)
    m = np.asarray(m, dtype=np.float64)
    if xhat.shape != m.shape:
        raise ValueError(f"shape mismatch: {xhat.shape} vs {m.shape}")
    return xhat, m


def relerr(xhat, m):
    """Squared relative error ``||xhat - m||_F**2 / ||m||_F**2``.

    Note the ratio is of squared norms, not of norms.
    """
    xhat, m = _pair(xhat, m)
    den = np.sum(m * m)
    if den == 0:
        raise ValueError("reference tensor is zero")
    return float(np.sum((xhat - m) ** 2) / den)


def psnr(xhat, m):
    """Peak signal-to-noise ratio in dB, with the peak taken from ``m``.

    ``10 log10(size * max|m|**2 / ||xhat - m||_F**2)``; ``inf`` on exact recovery.
    """
    xhat, m = _pair(xhat, m)
    peak = np.abs(m).max(initial=0.0)
    if peak == 0:
        raise ValueError("reference tensor is zero")
    err = np.sum((xhat - m) ** 2)
    if err == 0:
        return float("inf")
    return float(10.0 * np.log10(m.size * peak**2 / err))
