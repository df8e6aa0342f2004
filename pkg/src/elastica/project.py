"""Local L2 projections onto polynomial spaces on cells and edges.

The projection family used by the weak Galerkin scheme of order k:

* cell vector projection onto [P_k(T)]^2,
* edge vector projection onto [P_k(e)]^2,
* cell scalar projection onto P_{k-1}(T),
* cell matrix projection onto [P_{k-1}(T)]^{2x2} (componentwise scalar),
* the combined interior/edge projection into the WG space.

Fields are supplied as vectorized callables: ``f(x, y)`` receives
coordinate arrays of a common shape and returns an array of shape
``(..., 2)`` for vector fields, ``(...)`` for scalar fields and
``(..., 2, 2)`` for matrix fields.

All projections solve local Gram systems with quadrature-assembled
right-hand sides at exactness 2k+2, hence they are exact on polynomial
inputs of degree up to k+2.
"""

from __future__ import annotations

import numpy as np

from ._quadmap import cell_quadrature, edge_quadrature
from .errors import DegenerateElementError
from .mesh import Mesh
from .polyquad import CellBasis, EdgeBasis

__all__ = [
    "project_cell",
    "project_edge",
    "project_cell_scalar",
    "project_cell_matrix",
    "project_global",
]


def _solve_gram(G, rhs):
    try:
        return np.linalg.solve(G, rhs)
    except np.linalg.LinAlgError as exc:
        raise DegenerateElementError("singular local Gram matrix") from exc


def _cell_setup(m: Mesh, degree: int, exactness: int):
    pts, w = cell_quadrature(m, exactness)
    basis = CellBasis(degree, m.centroids(), m.h_per_element)
    phi = basis.evaluate(pts)  # (nt, nq, dim)
    gram = np.einsum("tq,tqi,tqj->tij", w, phi, phi)
    return pts, w, phi, gram


def project_cell(f, m: Mesh, k: int) -> np.ndarray:
    """L2-project the vector field f onto [P_k(T)]^2 on every element.

    Returns coefficients of shape (nt, 2, dim P_k).
    """
    pts, w, phi, gram = _cell_setup(m, k, 2 * k + 2)
    vals = np.asarray(f(pts[..., 0], pts[..., 1]), dtype=float)
    rhs = np.einsum("tq,tqi,tqc->tic", w, phi, vals)
    return _solve_gram(gram, rhs).transpose(0, 2, 1)


def project_cell_scalar(f, m: Mesh, k: int) -> np.ndarray:
    """L2-project the scalar field f onto P_{k-1}(T) on every element.

    Returns coefficients of shape (nt, dim P_{k-1}).
    """
    if k < 1:
        raise ValueError("scheme order k must be >= 1")
    pts, w, phi, gram = _cell_setup(m, k - 1, 2 * k + 2)
    vals = np.asarray(f(pts[..., 0], pts[..., 1]), dtype=float)
    rhs = np.einsum("tq,tqi,tq->ti", w, phi, vals)
    return _solve_gram(gram, rhs[..., None])[..., 0]


def project_cell_matrix(F, m: Mesh, k: int) -> np.ndarray:
    """L2-project the 2x2 matrix field F componentwise onto P_{k-1}(T).

    Returns coefficients of shape (nt, 2, 2, dim P_{k-1}).
    """
    if k < 1:
        raise ValueError("scheme order k must be >= 1")
    pts, w, phi, gram = _cell_setup(m, k - 1, 2 * k + 2)
    vals = np.asarray(F(pts[..., 0], pts[..., 1]), dtype=float)
    rhs = np.einsum("tq,tqi,tqab->tabi", w, phi, vals)
    nt, dim = gram.shape[0], gram.shape[1]
    sol = _solve_gram(gram, rhs.reshape(nt, 4, dim).transpose(0, 2, 1))
    return sol.transpose(0, 2, 1).reshape(nt, 2, 2, dim)


def project_edge(f, m: Mesh, k: int) -> np.ndarray:
    """L2-project the vector field f onto [P_k(e)]^2 on every edge.

    Returns coefficients of shape (ne, 2, k+1) in the canonical edge
    parameterization.
    """
    t, pts, w = edge_quadrature(m, 2 * k + 2)
    basis = EdgeBasis(k)
    chi = basis.evaluate(t)  # (nqe, k+1)
    gram = np.einsum("eq,qi,qj->eij", w, chi, chi)
    vals = np.asarray(f(pts[..., 0], pts[..., 1]), dtype=float)
    rhs = np.einsum("eq,qi,eqc->eic", w, chi, vals)
    return _solve_gram(gram, rhs).transpose(0, 2, 1)


def project_global(f, space) -> "WgFunction":  # noqa: F821
    """Combined projection {Q_0 f, Q_b f} into the WG space.

    Dirichlet-edge coefficients are kept as computed; they vanish exactly
    when f vanishes on the Dirichlet boundary.
    """
    from .wg import WgFunction

    cell = project_cell(f, space.mesh, space.order)
    edge = project_edge(f, space.mesh, space.order)
    coeffs = np.empty(space.num_dofs)
    coeffs[: space.num_interior_dofs] = cell.reshape(-1)
    coeffs[space.num_interior_dofs:] = edge.reshape(-1)
    return WgFunction(space=space, coeffs=coeffs)
