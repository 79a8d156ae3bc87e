"""Full-scale synthetic run: n = 1000, tubal rank 100, 30% sampling.

Target relerr is about 4.75e-3, accepted up to 1.5e-2. Expect tens of
minutes on one core. The last line has the same ``metrics`` format as
the CLI, which the acceptance suite parses when TCDLR_FULL_SCALE=1.
"""

import sys

from tcdlr import SolverConfig, solve_tcdlr_re
from tcdlr.harness import Metrics, SynthSpec, gen_synthetic, psnr, relerr, sample_uniform

n, rank, rate = 1000, 100, 0.3
seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0

m = gen_synthetic(SynthSpec(n, n, 3, rank, rate, seed))
obs = sample_uniform(m, rate, seed=1000 + seed)


def progress(entry, x, e):
    if entry.iteration % 25 == 0:
        print(f"iteration {entry.iteration}: ranks {entry.ranks}, residual {entry.primal_residual:.2e}, "
              f"{entry.elapsed:.0f} s", flush=True)


# headline setup: k_init = 1.5 r, k_min = 25, k_max = n / 2
rep = solve_tcdlr_re(obs, SolverConfig(k_init=int(1.5 * rank), max_iters=300, seed=seed), callback=progress)
met = Metrics(relerr(rep.recovered, m), psnr(rep.recovered, m), rep.wall_time, rep.iterations)
print("metrics " + " ".join(f"{k}={v}" for k, v in met.as_pairs())
      + f" termination={rep.termination} ranks={','.join(map(str, rep.ranks))}")
