import numpy as np
import pytest

from tcdlr.harness.metrics import relerr
from tcdlr.harness.synthetic import SynthSpec, gen_synthetic, sample_uniform
from tcdlr.reference import TNN_MAX_SHAPE, bcirc, fold, solve_tnn, tprod_bcirc, unfold
from tcdlr.solver import Observation, SolverConfig, solve_tcdlr
from tcdlr.surrogate import SurrogateSpec
from tcdlr.tproduct import identity_tensor

from conftest import low_rank_instance


def test_bcirc_layout():
    a = np.arange(8.0).reshape(2, 1, 4)
    c = bcirc(a)
    assert c.shape == (8, 4)
    # first block column lists slices 0..3, then cyclic shifts
    assert np.array_equal(c[:, 0], a[:, 0, :].T.ravel())
    assert np.array_equal(c[2:4, 1], a[:, 0, 0])
    assert np.array_equal(c[0:2, 1], a[:, 0, 3])


def test_fold_unfold_round_trip(rng):
    a = rng.standard_normal((3, 4, 5))
    assert unfold(a).shape == (15, 4)
    assert np.array_equal(fold(unfold(a), 5), a)


def test_identity_reproduces(rng):
    b = rng.standard_normal((3, 4, 5))
    assert np.allclose(tprod_bcirc(identity_tensor(3, 5), b), b)


def test_single_slice_is_matrix_product(rng):
    a = rng.standard_normal((3, 2, 1))
    b = rng.standard_normal((2, 4, 1))
    assert np.allclose(tprod_bcirc(a, b)[:, :, 0], a[:, :, 0] @ b[:, :, 0])


def test_guards():
    with pytest.raises(ValueError, match="guard"):
        tprod_bcirc(np.ones((60, 50, 20)), np.ones((50, 2, 20)))
    with pytest.raises(ValueError):
        tprod_bcirc(np.ones((2, 3, 2)), np.ones((2, 3, 2)))
    big = Observation(np.zeros((TNN_MAX_SHAPE[0] + 1, 10, 3)), np.ones((TNN_MAX_SHAPE[0] + 1, 10, 3), bool))
    with pytest.raises(ValueError, match="guard"):
        solve_tnn(big)


def test_tnn_fully_observed_exact():
    m = gen_synthetic(SynthSpec(20, 20, 3, 2, 1.0, 0))
    rep = solve_tnn(sample_uniform(m, 1.0))
    assert relerr(rep.recovered, m) <= 1e-8
    assert rep.state is None


def test_tnn_error_support():
    _, obs = low_rank_instance(rate=0.4)
    seen = []
    solve_tnn(obs, SolverConfig(max_iters=30), callback=lambda entry, x, e: seen.append(np.any(e[obs.mask])))
    assert len(seen) == 30 and not any(seen)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_tnn_matches_factored_identity_at_full_rank(seed):
    m, obs = low_rank_instance(rate=0.9, seed=seed)
    cfg = SolverConfig(surrogate=SurrogateSpec.identity(), k_init=30, seed=seed)
    a = solve_tnn(obs, cfg).recovered
    b = solve_tcdlr(obs, cfg).recovered
    assert relerr(b, a) <= 1e-3
    assert abs(relerr(a, m) - relerr(b, m)) <= 1e-3


def test_tnn_fails_at_high_rank_low_rate():
    m = gen_synthetic(SynthSpec(100, 100, 3, 50, 0.3, 0))
    rep = solve_tnn(sample_uniform(m, 0.3, seed=1), SolverConfig(max_iters=200))
    assert relerr(rep.recovered, m) > 1e-2


def test_reported_ranks_without_state():
    m = gen_synthetic(SynthSpec(20, 20, 3, 2, 1.0, 0))
    rep = solve_tnn(sample_uniform(m, 1.0))
    assert rep.ranks == [2, 2, 2]
