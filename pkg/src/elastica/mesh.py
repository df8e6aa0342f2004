"""Triangulations of the unit square and L-shaped domains.

Meshes carry full edge topology (edge -> incident triangles, triangle ->
edges) plus Dirichlet/Neumann tagging of boundary edges.  All meshes are
conforming triangulations; construction routines produce the structured
uniform diagonal-split pattern.  A mesh is immutable after construction:
tagging returns a new object.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "Mesh",
    "BoundarySpec",
    "build_square_mesh",
    "build_lshape_mesh",
    "refine_uniform",
    "classify_boundary",
    "dump_mesh",
    "full_dirichlet",
    "bottom_dirichlet",
]

_EPS = 1e-12


@dataclass(frozen=True)
class BoundarySpec:
    """Selector for Dirichlet boundary edges.

    ``dirichlet_predicate(x, y)`` is evaluated at boundary-edge midpoints;
    edges where it returns True are tagged Dirichlet, the rest Neumann.
    """

    dirichlet_predicate: Callable[[float, float], bool]


def full_dirichlet() -> BoundarySpec:
    """Spec tagging the whole boundary as Dirichlet."""
    return BoundarySpec(lambda x, y: True)


def bottom_dirichlet(tol: float = 1e-10) -> BoundarySpec:
    """Spec tagging only the bottom side y=0 as Dirichlet."""
    return BoundarySpec(lambda x, y: abs(y) < tol)


@dataclass(frozen=True)
class Mesh:
    """Conforming triangulation with edge topology.

    Attributes
    ----------
    vertices : (nv, 2) float array
    triangles : (nt, 3) int array
        Vertex indices, counterclockwise.
    edges : (ne, 2) int array
        Vertex index pairs, smaller index first.
    edge_tris : (ne, 2) int array
        Incident triangles; column 1 is -1 for boundary edges.  For
        interior edges column 0 holds T+ (the smaller triangle index), so
        the edge normal points from T+ to T-.
    tri_edges : (nt, 3) int array
        Global edge index of each local edge; local edge l is opposite
        local vertex l.
    edge_tags : (ne,) unicode array
        '' for interior edges, 'D'/'N' for tagged boundary edges, 'B' for
        untagged boundary edges.
    h_per_element : (nt,) float array
        Element diameters (longest edge).
    h_global : float
        max over elements of h_T.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    edges: np.ndarray = field(repr=False, default=None)
    edge_tris: np.ndarray = field(repr=False, default=None)
    tri_edges: np.ndarray = field(repr=False, default=None)
    edge_tags: np.ndarray = field(repr=False, default=None)
    h_per_element: np.ndarray = field(repr=False, default=None)
    h_global: float = 0.0

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_triangles(self) -> int:
        return len(self.triangles)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def boundary_edges(self) -> np.ndarray:
        return np.where(self.edge_tris[:, 1] < 0)[0]

    @property
    def interior_edges(self) -> np.ndarray:
        return np.where(self.edge_tris[:, 1] >= 0)[0]

    @property
    def dirichlet_edges(self) -> np.ndarray:
        return np.where(self.edge_tags == "D")[0]

    @property
    def neumann_edges(self) -> np.ndarray:
        return np.where(self.edge_tags == "N")[0]

    def edge_lengths(self) -> np.ndarray:
        p = self.vertices
        d = p[self.edges[:, 1]] - p[self.edges[:, 0]]
        return np.hypot(d[:, 0], d[:, 1])

    def edge_midpoints(self) -> np.ndarray:
        p = self.vertices
        return 0.5 * (p[self.edges[:, 0]] + p[self.edges[:, 1]])

    def centroids(self) -> np.ndarray:
        return self.vertices[self.triangles].mean(axis=1)

    def areas(self) -> np.ndarray:
        p = self.vertices[self.triangles]
        return 0.5 * np.abs(
            (p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
            - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1])
        )

    def signed_areas(self) -> np.ndarray:
        p = self.vertices[self.triangles]
        return 0.5 * (
            (p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1])
            - (p[:, 2, 0] - p[:, 0, 0]) * (p[:, 1, 1] - p[:, 0, 1])
        )

    def outward_normals(self) -> np.ndarray:
        """Outward unit normals, shape (nt, 3, 2), per local edge."""
        p = self.vertices
        tri = self.triangles
        normals = np.empty((len(tri), 3, 2))
        for l in range(3):
            a = p[tri[:, (l + 1) % 3]]
            b = p[tri[:, (l + 2) % 3]]
            t = b - a
            # rotate tangent by -90 degrees; for CCW triangles this points out
            n = np.stack([t[:, 1], -t[:, 0]], axis=1)
            normals[:, l, :] = n / np.linalg.norm(n, axis=1)[:, None]
        return normals


def _build_topology(vertices: np.ndarray, triangles: np.ndarray) -> Mesh:
    vertices = np.asarray(vertices, dtype=float)
    triangles = np.asarray(triangles, dtype=np.int64)

    # enforce counterclockwise orientation
    p = vertices[triangles]
    sa = (p[:, 1, 0] - p[:, 0, 0]) * (p[:, 2, 1] - p[:, 0, 1]) - (
        p[:, 2, 0] - p[:, 0, 0]
    ) * (p[:, 1, 1] - p[:, 0, 1])
    flip = sa < 0
    if np.any(flip):
        triangles = triangles.copy()
        triangles[flip, 1], triangles[flip, 2] = (
            triangles[flip, 2],
            triangles[flip, 1],
        )

    nt = len(triangles)
    # local edge l is opposite local vertex l
    raw = np.stack(
        [
            triangles[:, [1, 2]],
            triangles[:, [2, 0]],
            triangles[:, [0, 1]],
        ],
        axis=1,
    ).reshape(-1, 2)
    canon = np.sort(raw, axis=1)
    edges, inverse = np.unique(canon, axis=0, return_inverse=True)
    tri_edges = inverse.reshape(nt, 3)

    ne = len(edges)
    edge_tris = np.full((ne, 2), -1, dtype=np.int64)
    # fill incident triangles; T+ = smaller triangle index first
    order = np.argsort(inverse, kind="stable")
    tris_of_entry = order // 3
    counts = np.bincount(inverse, minlength=ne)
    pos = 0
    for e in range(ne):
        c = counts[e]
        inc = np.sort(tris_of_entry[pos : pos + c])
        edge_tris[e, :c] = inc
        pos += c
    if np.any(counts > 2) or np.any(counts == 0):
        raise ValueError("non-manifold triangulation")

    edge_tags = np.full(ne, "", dtype="<U1")
    edge_tags[edge_tris[:, 1] < 0] = "B"

    ep = vertices[edges]
    elen = np.hypot(ep[:, 1, 0] - ep[:, 0, 0], ep[:, 1, 1] - ep[:, 0, 1])
    h_per_element = elen[tri_edges].max(axis=1)

    return Mesh(
        vertices=vertices,
        triangles=triangles,
        edges=edges,
        edge_tris=edge_tris,
        tri_edges=tri_edges,
        edge_tags=edge_tags,
        h_per_element=h_per_element,
        h_global=float(h_per_element.max()),
    )


def _structured_cells(nx: int, ny: int, x0: float, y0: float, h: float):
    """Vertices/triangles of an nx-by-ny grid of cells, diagonal SW->NE."""
    xs = x0 + h * np.arange(nx + 1)
    ys = y0 + h * np.arange(ny + 1)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    verts = np.stack([X.ravel(), Y.ravel()], axis=1)

    def vid(i, j):
        return i * (ny + 1) + j

    tris = []
    for i in range(nx):
        for j in range(ny):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i + 1, j + 1), vid(i, j + 1)
            # split along the diagonal a -> c
            tris.append([a, b, c])
            tris.append([a, c, d])
    return verts, np.array(tris, dtype=np.int64)


def _dedupe(verts: np.ndarray, tris: np.ndarray):
    """Merge coincident vertices (exact dyadic coordinates, so keys are safe)."""
    key = np.round(verts / _EPS).astype(np.int64)
    _, first, inverse = np.unique(key, axis=0, return_index=True, return_inverse=True)
    return verts[first], inverse[tris]


def build_square_mesh(n: int) -> Mesh:
    """Uniform mesh of the unit square with n x n cells, 2n^2 triangles."""
    if n < 1:
        raise ValueError(f"subdivision count must be >= 1, got {n}")
    verts, tris = _structured_cells(n, n, 0.0, 0.0, 1.0 / n)
    return _build_topology(verts, tris)


def build_lshape_mesh(n: int) -> Mesh:
    """Uniform mesh of the L-shaped domain (0,2)^2 minus (1,2)^2.

    n is the number of subdivisions per unit length; the mesh has 6n^2
    triangles (three unit squares).
    """
    if n < 1:
        raise ValueError(f"subdivision count must be >= 1, got {n}")
    h = 1.0 / n
    v1, t1 = _structured_cells(n, n, 0.0, 0.0, h)  # lower-left square
    v2, t2 = _structured_cells(n, n, 1.0, 0.0, h)  # lower-right square
    v3, t3 = _structured_cells(n, n, 0.0, 1.0, h)  # upper-left square
    verts = np.vstack([v1, v2 + 0.0, v3])
    tris = np.vstack([t1, t2 + len(v1), t3 + len(v1) + len(v2)])
    verts, tris = _dedupe(verts, tris)
    return _build_topology(verts, tris)


def refine_uniform(m: Mesh) -> Mesh:
    """Red refinement: each triangle split into 4 congruent children.

    Boundary tags are inherited by the two halves of each tagged edge.
    """
    verts = m.vertices
    nv = len(verts)
    mid = 0.5 * (verts[m.edges[:, 0]] + verts[m.edges[:, 1]])
    new_verts = np.vstack([verts, mid])
    midid = nv + np.arange(m.num_edges)

    t = m.triangles
    e = m.tri_edges
    m0, m1, m2 = midid[e[:, 0]], midid[e[:, 1]], midid[e[:, 2]]
    children = np.concatenate(
        [
            np.stack([t[:, 0], m2, m1], axis=1),
            np.stack([t[:, 1], m0, m2], axis=1),
            np.stack([t[:, 2], m1, m0], axis=1),
            np.stack([m0, m1, m2], axis=1),
        ]
    )
    refined = _build_topology(new_verts, children)

    # inherit boundary tags: parent edge (a,b) with midpoint m splits into
    # (a,m) and (m,b)
    tagged = np.where(np.isin(m.edge_tags, ("D", "N")))[0]
    if len(tagged):
        tag_of = {}
        for e_id in tagged:
            a, b = m.edges[e_id]
            mm = midid[e_id]
            tag = m.edge_tags[e_id]
            tag_of[(min(a, mm), max(a, mm))] = tag
            tag_of[(min(b, mm), max(b, mm))] = tag
        tags = refined.edge_tags.copy()
        for e_id in refined.boundary_edges:
            key = tuple(refined.edges[e_id])
            if key in tag_of:
                tags[e_id] = tag_of[key]
        refined = Mesh(
            vertices=refined.vertices,
            triangles=refined.triangles,
            edges=refined.edges,
            edge_tris=refined.edge_tris,
            tri_edges=refined.tri_edges,
            edge_tags=tags,
            h_per_element=refined.h_per_element,
            h_global=refined.h_global,
        )
    return refined


def classify_boundary(m: Mesh, spec: BoundarySpec) -> Mesh:
    """Tag boundary edges as Dirichlet ('D') or Neumann ('N').

    Raises ValueError when the spec selects no Dirichlet edge (the
    eigenvalue problem needs |Gamma_D| > 0).
    """
    tags = m.edge_tags.copy()
    mids = m.edge_midpoints()
    ndir = 0
    for e_id in m.boundary_edges:
        x, y = mids[e_id]
        if spec.dirichlet_predicate(x, y):
            tags[e_id] = "D"
            ndir += 1
        else:
            tags[e_id] = "N"
    if ndir == 0:
        raise ValueError("boundary spec selects no Dirichlet edge")
    return Mesh(
        vertices=m.vertices,
        triangles=m.triangles,
        edges=m.edges,
        edge_tris=m.edge_tris,
        tri_edges=m.tri_edges,
        edge_tags=tags,
        h_per_element=m.h_per_element,
        h_global=m.h_global,
    )


def dump_mesh(m: Mesh, path) -> None:
    """Plain-text dump: `v x y`, `t i j k`, `e i j {D|N}` lines."""
    with open(path, "w") as fh:
        for x, y in m.vertices:
            fh.write(f"v {x!r} {y!r}\n")
        for i, j, k in m.triangles:
            fh.write(f"t {i} {j} {k}\n")
        for e_id in m.boundary_edges:
            tag = m.edge_tags[e_id]
            if tag in ("D", "N"):
                i, j = m.edges[e_id]
                fh.write(f"e {i} {j} {tag}\n")
