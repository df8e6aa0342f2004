"""Source-problem convergence with a manufactured solution.

Solves -div sigma(u) = f on the unit square with u = (g, g),
g = sin(pi x) sin(pi y), prescribed through its analytic load f, and
measures the error of the weak Galerkin solution against the projection of
u.  The energy norm converges at order k, the interior L2 norm at k+1.
"""

import numpy as np

from elastica import ElasticParams, StabilizationConfig, WgFunction, WgSpace
from elastica import build_square_mesh, classify_boundary, full_dirichlet
from elastica import solve_source
from elastica.project import project_global
from elastica.wg import norms

params = ElasticParams(E=1.0, nu=0.3)
stab = StabilizationConfig()
mu, lam = params.mu, params.lam
pi = np.pi


def u(x, y):
    s = np.sin(pi * x) * np.sin(pi * y)
    return np.stack([s, s], axis=-1)


def f(x, y):
    s = np.sin(pi * x) * np.sin(pi * y)
    c = np.cos(pi * x) * np.cos(pi * y)
    val = 2 * mu * pi**2 * s + (mu + lam) * pi**2 * (s - c)
    return np.stack([val, val], axis=-1)


for k, ns in ((1, (4, 8, 16, 32)), (2, (4, 8, 16))):
    print(f"\nWG k={k}")
    prev = None
    for n in ns:
        mesh = classify_boundary(build_square_mesh(n), full_dirichlet())
        space = WgSpace(mesh, k)
        uh = solve_source(space, params, stab, f)
        err = WgFunction(space, project_global(u, space).coeffs - uh.coeffs)
        vn, xn = norms(err, params)
        if prev is None:
            print(f"  h=1/{n:<3} energy {vn:.3e}          L2 {xn:.3e}")
        else:
            rv = np.log2(prev[0] / vn)
            rx = np.log2(prev[1] / xn)
            print(
                f"  h=1/{n:<3} energy {vn:.3e} ({rv:.2f})   "
                f"L2 {xn:.3e} ({rx:.2f})"
            )
        prev = (vn, xn)
    print(f"  expected rates: energy ~{k}, L2 ~{k + 1}")
