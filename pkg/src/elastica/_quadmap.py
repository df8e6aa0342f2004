"""Mapped quadrature over mesh entities (internal helper)."""

from __future__ import annotations

import numpy as np

from .mesh import Mesh
from .polyquad import edge_rule, triangle_rule


def cell_quadrature(m: Mesh, exactness: int):
    """Physical quadrature over all elements.

    Returns (points, weights): points (nt, nq, 2), weights (nt, nq) with
    sum over q equal to the element area.
    """
    rule = triangle_rule(exactness)
    p = m.vertices[m.triangles]  # (nt, 3, 2)
    p0 = p[:, 0, :]
    B = np.stack([p[:, 1, :] - p0, p[:, 2, :] - p0], axis=-1)  # (nt, 2, 2)
    pts = p0[:, None, :] + np.einsum("tij,qj->tqi", B, rule.points)
    det = np.abs(B[:, 0, 0] * B[:, 1, 1] - B[:, 0, 1] * B[:, 1, 0])
    w = det[:, None] * rule.weights[None, :]
    return pts, w


def edge_quadrature(m: Mesh, exactness: int):
    """Physical quadrature along all edges, in canonical orientation.

    The canonical parameterization runs from the smaller-index endpoint to
    the larger at t in [-1, 1]; both incident elements therefore see
    identical points and edge-basis values.

    Returns (params, points, weights): params (nqe,), points (ne, nqe, 2),
    weights (ne, nqe) with sum over q equal to the edge length.
    """
    rule = edge_rule(exactness)
    a = m.vertices[m.edges[:, 0]]
    b = m.vertices[m.edges[:, 1]]
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    pts = mid[:, None, :] + rule.points[None, :, None] * half[:, None, :]
    length = 2.0 * np.hypot(half[:, 0], half[:, 1])
    w = 0.5 * length[:, None] * rule.weights[None, :]
    return rule.points, pts, w
