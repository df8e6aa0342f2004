"""Scaled monomial bases on triangles/edges and quadrature rules.

Cell bases are monomials in the centroid-scaled coordinates
((x - x_T)/h_T, (y - y_T)/h_T), which keeps local Gram matrices well
conditioned for the low orders used here.  Edge bases are monomials in the
arclength parameter mapped to [-1, 1].  Quadrature on the reference
triangle {x, y >= 0, x + y <= 1} uses a Duffy-collapsed tensor Gauss rule,
exact to any requested degree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "CellBasis",
    "EdgeBasis",
    "QuadratureRule",
    "triangle_rule",
    "edge_rule",
    "cell_basis_dim",
]

MAX_TRIANGLE_DEGREE = 30


def cell_basis_dim(k: int) -> int:
    """Dimension of P_k on a triangle."""
    return (k + 1) * (k + 2) // 2


@dataclass(frozen=True)
class QuadratureRule:
    """Points/weights pair with a certified exactness degree.

    Triangle rules live on the reference triangle (points shape (nq, 2),
    weights summing to 1/2); edge rules live on [-1, 1].
    """

    points: np.ndarray
    weights: np.ndarray
    exactness_degree: int


def triangle_rule(exactness: int) -> QuadratureRule:
    """Rule on the reference triangle exact for total degree <= exactness."""
    if exactness < 0:
        raise ValueError("exactness degree must be >= 0")
    if exactness > MAX_TRIANGLE_DEGREE:
        raise ValueError(
            f"triangle rules supported up to degree {MAX_TRIANGLE_DEGREE}"
        )
    # Duffy map x = u, y = v (1 - u): monomial x^a y^b picks up (1-u)^(b+1),
    # so degrees per axis are at most exactness + 1.
    npt = exactness // 2 + 2
    u, wu = np.polynomial.legendre.leggauss(npt)
    u = 0.5 * (u + 1.0)
    wu = 0.5 * wu
    U, V = np.meshgrid(u, u, indexing="ij")
    W = np.outer(wu, wu) * (1.0 - U)
    x = U.ravel()
    y = (V * (1.0 - U)).ravel()
    return QuadratureRule(
        points=np.stack([x, y], axis=1),
        weights=W.ravel(),
        exactness_degree=exactness,
    )


def edge_rule(exactness: int) -> QuadratureRule:
    """Gauss-Legendre rule on [-1, 1] exact for degree <= exactness."""
    if exactness < 0:
        raise ValueError("exactness degree must be >= 0")
    npt = exactness // 2 + 1
    t, w = np.polynomial.legendre.leggauss(npt)
    return QuadratureRule(points=t, weights=w, exactness_degree=exactness)


class CellBasis:
    """Vectorized scaled-monomial basis of P_k over a batch of triangles.

    Parameters
    ----------
    degree : polynomial degree k >= 0.
    centroids : (ne, 2) element centroids.
    diameters : (ne,) element diameters h_T used for scaling.
    """

    def __init__(self, degree: int, centroids: np.ndarray, diameters: np.ndarray):
        if degree < 0:
            raise ValueError("degree must be >= 0")
        self.degree = degree
        self.centroids = np.atleast_2d(np.asarray(centroids, dtype=float))
        self.diameters = np.atleast_1d(np.asarray(diameters, dtype=float))
        exps = [(a, b) for d in range(degree + 1) for a, b in
                ((d - j, j) for j in range(d + 1))]
        self.exponents = np.array(exps, dtype=np.int64)

    @property
    def dim(self) -> int:
        return len(self.exponents)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Basis values at physical points.

        points : (ne, nq, 2) or (nq, 2) broadcast against the batch.
        Returns values of shape (ne, nq, dim).
        """
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 2:
            pts = np.broadcast_to(pts, (len(self.centroids),) + pts.shape)
        xi = (pts - self.centroids[:, None, :]) / self.diameters[:, None, None]
        a = self.exponents[:, 0]
        b = self.exponents[:, 1]
        return xi[..., 0:1] ** a * xi[..., 1:2] ** b

    def evaluate_gradient(self, points: np.ndarray) -> np.ndarray:
        """Basis gradients at physical points, shape (ne, nq, dim, 2)."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 2:
            pts = np.broadcast_to(pts, (len(self.centroids),) + pts.shape)
        xi = (pts - self.centroids[:, None, :]) / self.diameters[:, None, None]
        a = self.exponents[:, 0]
        b = self.exponents[:, 1]
        x = xi[..., 0:1]
        y = xi[..., 1:2]
        with np.errstate(invalid="ignore"):
            dx = np.where(a > 0, a * x ** np.maximum(a - 1, 0) * y ** b, 0.0)
            dy = np.where(b > 0, b * x ** a * y ** np.maximum(b - 1, 0), 0.0)
        scale = self.diameters[:, None, None]
        return np.stack([dx / scale, dy / scale], axis=-1)


class EdgeBasis:
    """Monomial basis of P_k(e) in the arclength parameter on [-1, 1]."""

    def __init__(self, degree: int):
        if degree < 0:
            raise ValueError("degree must be >= 0")
        self.degree = degree

    @property
    def dim(self) -> int:
        return self.degree + 1

    def evaluate(self, t: np.ndarray) -> np.ndarray:
        """Values at parameters t, shape t.shape + (dim,)."""
        t = np.asarray(t, dtype=float)
        return t[..., None] ** np.arange(self.degree + 1)
