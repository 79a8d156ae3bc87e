"""Low-tubal-rank tensor completion with a dual low-rank constraint.

Core pieces: FFT-domain t-product algebra (:mod:`tcdlr.tproduct`),
nonconvex singular value surrogates (:mod:`tcdlr.surrogate`), factored
thresholding (:mod:`tcdlr.gtsvt`) and the ADMM solvers
(:mod:`tcdlr.solver`). :mod:`tcdlr.reference` holds slow oracles and
:mod:`tcdlr.harness` the experiment plumbing.
"""

from .gtsvt import FactorState, gtsvt_factored, gtsvt_full
from .solver import (
    Observation,
    SolverConfig,
    SolverReport,
    solve,
    solve_tcdlr,
    solve_tcdlr_re,
)
from .surrogate import KINDS, SurrogateSpec, prox
from .tproduct import (
    norm_star_g,
    norm_star_kg,
    tnn,
    tprod,
    tqr,
    tsvd,
    ttranspose,
    tubal_rank,
)

__version__ = "0.1.0"

__all__ = [
    "FactorState",
    "KINDS",
    "Observation",
    "SolverConfig",
    "SolverReport",
    "SurrogateSpec",
    "gtsvt_factored",
    "gtsvt_full",
    "norm_star_g",
    "norm_star_kg",
    "prox",
    "solve",
    "solve_tcdlr",
    "solve_tcdlr_re",
    "tnn",
    "tprod",
    "tqr",
    "tsvd",
    "ttranspose",
    "tubal_rank",
]
