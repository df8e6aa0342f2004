"""Experiment harness: eigenfrequency tables, convergence orders, sweeps.

Reproduces the three benchmark experiments at desk scale:

* ``square``  -- unit square, whole boundary clamped,
* ``lshape``  -- L-shaped domain (0,2)^2 minus (1,2)^2, whole boundary clamped,
* ``mixed``   -- unit square clamped on the bottom side only.

Each run solves a ladder of uniformly refined meshes (level n means cell
size 1/n), reports the first eigenfrequencies omega = sqrt(gamma) per
level, and extrapolates the convergence order of the eigenvalues from the
three finest levels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from . import cr as cr_mod
from . import wg as wg_mod
from .errors import SolverFailure
from .mesh import (
    Mesh,
    bottom_dirichlet,
    build_lshape_mesh,
    build_square_mesh,
    classify_boundary,
    full_dirichlet,
)

__all__ = [
    "ExperimentConfig",
    "RateTable",
    "convergence_order",
    "richardson_limit",
    "run_experiment",
    "locking_sweep",
    "check_lower_bounds",
    "emit",
    "parse_csv",
    "EXPERIMENTS",
]

# experiment name -> (domain, boundary)
EXPERIMENTS = {
    "square": ("square", "all-dirichlet"),
    "lshape": ("lshape", "all-dirichlet"),
    "mixed": ("square", "bottom-dirichlet"),
}


@dataclass(frozen=True)
class ExperimentConfig:
    domain: str = "square"
    boundary: str = "all-dirichlet"
    method: str = "wg"
    order: int = 1
    E: float = 1.0
    nu: float = 0.49
    delta: float = 0.05
    levels: tuple = (16, 32, 64)
    num_eigs: int = 4
    tol: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.domain not in ("square", "lshape"):
            raise ValueError(f"unknown domain {self.domain!r}")
        if self.boundary not in ("all-dirichlet", "bottom-dirichlet"):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if self.method not in ("wg", "cr"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.num_eigs < 1:
            raise ValueError("num_eigs must be >= 1")
        levels = tuple(int(n) for n in self.levels)
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise ValueError("levels must be strictly increasing")
        if any(n & (n - 1) for n in levels):
            raise ValueError("levels must be powers of two")
        object.__setattr__(self, "levels", levels)


@dataclass
class RateTable:
    """Eigenfrequencies per level plus extrapolated eigenvalue orders."""

    config: ExperimentConfig
    levels: tuple
    omegas: np.ndarray          # (num_eigs, nlevels), NaN on failed levels
    gammas: np.ndarray          # (num_eigs, nlevels)
    orders: Optional[np.ndarray] = None   # (num_eigs,), None if < 3 levels
    failures: dict = field(default_factory=dict)  # level -> message


def convergence_order(g1: float, g2: float, g3: float) -> float:
    """Extrapolated order from eigenvalues at h, h/2, h/4.

    Returns lg((g1-g2)/(g2-g3))/lg 2, or NaN when the consecutive
    differences vanish or disagree in sign.
    """
    d1 = g1 - g2
    d2 = g2 - g3
    if d2 == 0.0 or d1 * d2 <= 0.0:
        return math.nan
    return math.log(d1 / d2) / math.log(2.0)


def richardson_limit(g1: float, g2: float, g3: float) -> float:
    """Aitken extrapolation of a geometrically converging ladder."""
    d1 = g2 - g1
    d2 = g3 - g2
    denom = d1 - d2
    if denom == 0.0:
        return g3
    return g3 + d2 * d2 / denom

def _build_mesh(cfg: ExperimentConfig, n: int) -> Mesh:
    m = build_square_mesh(n) if cfg.domain == "square" else build_lshape_mesh(n)
    spec = full_dirichlet() if cfg.boundary == "all-dirichlet" else bottom_dirichlet()
    return classify_boundary(m, spec)


def solve_level(cfg: ExperimentConfig, n: int) -> wg_mod.EigenResult:
    """Solve one refinement level of an experiment."""
    mesh = _build_mesh(cfg, n)
    params = wg_mod.ElasticParams(E=cfg.E, nu=cfg.nu)
    stab = wg_mod.StabilizationConfig(delta=cfg.delta)
    if cfg.method == "wg":
        space = wg_mod.WgSpace(mesh, cfg.order)
        sys = wg_mod.assemble_forms(space, params, stab)
        return wg_mod.solve_eigen(sys, cfg.num_eigs, tol=cfg.tol, seed=cfg.seed)
    space = cr_mod.CrSpace(mesh)
    sys = cr_mod.assemble_cr(space, params, stab)
    return cr_mod.solve_cr_eigen(sys, cfg.num_eigs, tol=cfg.tol, seed=cfg.seed)


def run_experiment(cfg: ExperimentConfig) -> RateTable:
    """Run the whole refinement ladder; per-level failures are recorded."""
    m = cfg.num_eigs
    nlev = len(cfg.levels)
    gammas = np.full((m, nlev), np.nan)
    failures = {}
    for col, n in enumerate(cfg.levels):
        try:
            res = solve_level(cfg, n)
            gammas[:, col] = res.eigenvalues
        except SolverFailure as exc:
            failures[n] = str(exc)
    omegas = np.sqrt(gammas)
    orders = None
    if nlev >= 3:
        a, b, c = cfg.levels[-3:]
        orders = np.full(m, np.nan)
        if 2 * a == b and 2 * b == c:
            for j in range(m):
                orders[j] = convergence_order(*gammas[j, -3:])
    return RateTable(
        config=cfg,
        levels=cfg.levels,
        omegas=omegas,
        gammas=gammas,
        orders=orders,
        failures=failures,
    )


def locking_sweep(cfg: ExperimentConfig, nus) -> dict:
    """Run the experiment per Poisson ratio and report eigenfrequency drift.

    Returns {"nus": ..., "tables": {nu: RateTable}, "max_rel_deviation":
    (num_eigs, nlevels) array of the spread across nu values}.
    """
    nus = list(nus)
    if len(nus) < 2:
        raise ValueError("locking sweep needs at least two Poisson ratios")
    tables = {nu: run_experiment(replace(cfg, nu=nu)) for nu in nus}
    stack = np.stack([tables[nu].omegas for nu in nus])  # (nnu, m, nlev)
    dev = (stack.max(axis=0) - stack.min(axis=0)) / stack.min(axis=0)
    return {"nus": nus, "tables": tables, "max_rel_deviation": dev}


def check_lower_bounds(table: RateTable, slack: float = 1e-8) -> bool:
    """Monotone nondecreasing gamma ladder, below its Richardson limit."""
    g = table.gammas
    if np.any(np.isnan(g)):
        return False
    if np.any(np.diff(g, axis=1) < 0):
        return False
    if g.shape[1] >= 3:
        for j in range(g.shape[0]):
            limit = richardson_limit(*g[j, -3:])
            if np.any(g[j] > limit + slack):
                return False
    return True


def emit(table: RateTable, fmt: str, path) -> None:
    """Write a table as CSV (machine format) or markdown (report layout)."""
    if fmt == "csv":
        _emit_csv(table, path)
    elif fmt in ("md", "markdown"):
        _emit_markdown(table, path)
    else:
        raise ValueError(f"unknown format {fmt!r}")


def _emit_csv(table: RateTable, path) -> None:
    with open(path, "w") as fh:
        fh.write("j,h,omega,order\n")
        for j in range(table.omegas.shape[0]):
            order = "" if table.orders is None else repr(float(table.orders[j]))
            for col, n in enumerate(table.levels):
                fh.write(f"{j + 1},1/{n},{float(table.omegas[j, col])!r},{order}\n")


def parse_csv(path):
    """Re-parse an emitted CSV into (levels, omegas, orders)."""
    import csv

    rows = []
    with open(path) as fh:
        for rec in csv.DictReader(fh):
            rows.append(rec)
    if not rows:
        return (), np.zeros((0, 0)), None
    levels = sorted({int(r["h"].split("/")[1]) for r in rows})
    js = sorted({int(r["j"]) for r in rows})
    omegas = np.full((len(js), len(levels)), np.nan)
    orders = np.full(len(js), np.nan)
    have_orders = False
    for r in rows:
        j = int(r["j"]) - 1
        col = levels.index(int(r["h"].split("/")[1]))
        omegas[j, col] = float(r["omega"])
        if r["order"]:
            orders[j] = float(r["order"])
            have_orders = True
    return tuple(levels), omegas, (orders if have_orders else None)


def _emit_markdown(table: RateTable, path) -> None:
    hs = [f"1/{n}" for n in table.levels]
    with open(path, "w") as fh:
        fh.write("| h | " + " | ".join(hs) + " | Order |\n")
        fh.write("|" + "---|" * (len(hs) + 2) + "\n")
        for j in range(table.omegas.shape[0]):
            cells = [f"{table.omegas[j, c]:.6f}" for c in range(len(hs))]
            if table.orders is None or math.isnan(table.orders[j]):
                order = "-"
            else:
                order = f"{table.orders[j]:.2f}"
            fh.write(f"| omega_{j + 1} | " + " | ".join(cells) + f" | {order} |\n")
