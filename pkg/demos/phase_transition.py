"""Small phase-transition grid: success (relerr <= 1e-2) over rank and sampling rate.

Writes phase.csv next to this script and prints the grid as a text map,
'#' for success and '.' for failure.
"""

from pathlib import Path

from tcdlr import SolverConfig
from tcdlr.harness.sweep import phase_sweep

n = 60
ranks = [0.05, 0.1, 0.2, 0.3, 0.4]
rates = [0.1, 0.2, 0.3, 0.5, 0.7, 0.9]
out = Path(__file__).with_name("phase.csv")

cells = phase_sweep(n, ranks, rates, trials=2, cfg=SolverConfig(k_min=2, max_iters=200), csv_path=out)

print("rank/n  " + " ".join(f"{c:4.1f}" for c in rates))
for f in ranks:
    row = [cell for cell in cells if cell.rank_fraction == f]
    print(f"{f:6.2f}  " + " ".join("   #" if cell.success else "   ." for cell in row))
print("written", out)
