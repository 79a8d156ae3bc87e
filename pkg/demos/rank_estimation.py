"""Watch the per-slice rank estimates settle from a bad starting guess.

The true tubal rank is 20. Starting at 5 exercises the randomized
increase test; starting at 60 exercises the gap-based decrease.
"""

from tcdlr import SolverConfig, solve_tcdlr_re
from tcdlr.harness import SynthSpec, gen_synthetic, relerr, sample_uniform

m = gen_synthetic(SynthSpec(200, 200, 3, rank=20, seed=0))
obs = sample_uniform(m, 0.3, seed=1000)

for k_init in (5, 30, 60):
    changes = []

    def watch(entry, x, e, changes=changes):
        if not changes or changes[-1][1] != entry.ranks:
            changes.append((entry.iteration, entry.ranks))

    cfg = SolverConfig(k_init=k_init, k_min=5, max_iters=300)
    rep = solve_tcdlr_re(obs, cfg, callback=watch)
    print(f"k_init={k_init}: relerr {relerr(rep.recovered, m):.2e}, {rep.wall_time:.1f} s")
    for it, ranks in changes:
        print(f"    iteration {it:3d}: ranks {ranks}")
