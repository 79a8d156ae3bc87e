"""Synthetic low-tubal-rank data and uniform observation sampling."""

from dataclasses import dataclass

import numpy as np

from ..solver import Observation
from ..tproduct import tprod

__all__ = ["SynthSpec", "gen_synthetic", "sample_uniform"]


@dataclass(frozen=True)
class SynthSpec:
    """``M = M1 * M2`` with i.i.d. standard normal ``M1`` (n1 x r x n3) and ``M2`` (r x n2 x n3)."""

    n1: int
    n2: int
    n3: int
    rank: int
    sample_rate: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if min(self.n1, self.n2, self.n3) < 1:
            raise ValueError("dimensions must be positive")
        if not 1 <= self.rank <= min(self.n1, self.n2):
            raise ValueError(f"rank must lie in [1, {min(self.n1, self.n2)}]")
        if not 0 < self.sample_rate <= 1:
            raise ValueError("sample_rate must lie in (0, 1]")


def gen_synthetic(spec):
    rng = np.random.default_rng(spec.seed)
    m1 = rng.standard_normal((spec.n1, spec.rank, spec.n3))
    m2 = rng.standard_normal((spec.rank, spec.n2, spec.n3))
    return tprod(m1, m2)


def sample_uniform(m, c, seed=0):
    """Observe exactly ``round(c * m.size)`` entries, uniformly without replacement."""
    m = np.asarray(m, dtype=np.float64)
    if not 0 < c <= 1:
        raise ValueError("sample rate must lie in (0, 1]")
    count = int(round(c * m.size))
    if count < 1:
        raise ValueError("sample rate leaves no observed entries")
    rng = np.random.default_rng(seed)
    mask = np.zeros(m.size, dtype=bool)
    mask[rng.choice(m.size, size=count, replace=False)] = True
    mask = mask.reshape(m.shape)
    return Observation.from_tensor(m, mask)
