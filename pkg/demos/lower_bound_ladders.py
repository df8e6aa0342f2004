"""Lower-bound behavior of the two discretizations.

The weak Galerkin eigenvalues approach the exact ones from below on every
benchmark.  The Crouzeix-Raviart element is subtler: its eigenvalues are
asymptotic lower bounds only when the eigenfunction is singular (mixed
boundary conditions, re-entrant corners); for smooth eigenfunctions it
converges from above.  This script prints both behaviors side by side.
"""

import numpy as np

from elastica import ExperimentConfig, run_experiment
from elastica.lab import check_lower_bounds, richardson_limit


def show(title, cfg):
    t = run_experiment(cfg)
    print(title)
    hs = "  ".join(f"1/{n}" for n in t.levels)
    print(f"  levels: {hs}")
    for j in range(t.gammas.shape[0]):
        g = t.gammas[j]
        arrow = "increasing" if np.all(np.diff(g) >= 0) else "decreasing"
        limit = richardson_limit(*g[-3:])
        print(
            f"  gamma_{j + 1}: "
            + "  ".join(f"{x:.6f}" for x in g)
            + f"   ({arrow}, extrapolated limit {limit:.6f})"
        )
    print(f"  lower-bound check: {'pass' if check_lower_bounds(t) else 'fail'}\n")


show(
    "WG k=1, clamped square (smooth modes, from below):",
    ExperimentConfig(levels=(8, 16, 32)),
)
show(
    "CR, mixed boundary (singular modes, from below):",
    ExperimentConfig(boundary="bottom-dirichlet", method="cr", levels=(16, 32, 64)),
)
show(
    "CR, clamped square (smooth modes, from above -- no lower bound):",
    ExperimentConfig(method="cr", levels=(8, 16, 32)),
)
