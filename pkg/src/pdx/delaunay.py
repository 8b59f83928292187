"""Planar Delaunay graphs: construction and neighbor/degree queries."""

from __future__ import annotations

import math

import numpy as np

from pdx import _kernel
from pdx.errors import DegenerateInputError, DuplicatePointError


class Triangulation:
    """Immutable planar Delaunay graph.

    Attributes
    ----------
    points : (n, 2) float64 array
    triangles : (t, 3) int32 array, CCW, smallest vertex first per row
    edges : (e, 2) int32 array, each row (u, v) with u < v
    hull : (n,) bool array, True for convex-hull vertices
    """

    __slots__ = ("points", "triangles", "edges", "hull", "_indptr", "_indices",
                 "_tri_indptr", "_tri_indices")

    def __init__(self, points, triangles, edges, hull, indptr=None,
                 indices=None):
        self.points = points
        self.triangles = triangles
        self.edges = edges
        self.hull = hull
        if indptr is None:
            from pdx._kernel.pure import _adjacency_csr

            indptr, indices = _adjacency_csr(len(points), edges)
        self._indptr = indptr
        self._indices = indices
        self._tri_indptr = None
        self._tri_indices = None
        for arr in (self.points, self.triangles, self.edges, self.hull,
                    self._indptr, self._indices):
            arr.setflags(write=False)

    @property
    def n_vertices(self) -> int:
        return len(self.points)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def neighbors(self, v: int) -> np.ndarray:
        """Sorted neighbor indices of vertex v."""
        if not 0 <= v < self.n_vertices:
            raise IndexError(f"vertex {v} out of range")
        return self._indices[self._indptr[v]:self._indptr[v + 1]]

    def degrees(self) -> np.ndarray:
        """Degree of every vertex as an int64 array."""
        return np.diff(self._indptr)

    def incident_triangles(self, v: int) -> np.ndarray:
        """Indices of triangles incident to v (built lazily, then cached)."""
        if not 0 <= v < self.n_vertices:
            raise IndexError(f"vertex {v} out of range")
        if self._tri_indptr is None:
            flat = self.triangles.ravel()
            order = np.argsort(flat, kind="stable")
            counts = np.bincount(flat, minlength=self.n_vertices)
            indptr = np.zeros(self.n_vertices + 1, dtype=np.int64)
            np.cumsum(counts, out=indptr[1:])
            self._tri_indptr = indptr
            self._tri_indices = (order // 3).astype(np.int32)
        return self._tri_indices[self._tri_indptr[v]:self._tri_indptr[v + 1]]


def degree(t: Triangulation, v: int) -> int:
    """Number of Delaunay neighbors of vertex v."""
    return int(len(t.neighbors(v)))


def _insertion_order(pts: np.ndarray) -> np.ndarray:
    """Serpentine cell order: spatially coherent, so each insertion walks
    O(1) triangles from the previous one at uniform density."""
    n = len(pts)
    g = max(1, int(math.sqrt(n / 2.0)))
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = np.maximum(hi - lo, 1e-300)
    cx = np.minimum((g * (pts[:, 0] - lo[0]) / span[0]).astype(np.int64), g - 1)
    cy = np.minimum((g * (pts[:, 1] - lo[1]) / span[1]).astype(np.int64), g - 1)
    key = cy * g + np.where(cy % 2 == 0, cx, g - 1 - cx)
    return np.argsort(key, kind="stable").astype(np.int32)


def _check_duplicates(pts: np.ndarray) -> None:
    # complex view sorts lexicographically by (x, y) in a single pass
    z = np.sort(pts.view(np.complex128).ravel())
    dup = np.nonzero(z[1:] == z[:-1])[0]
    if len(dup):
        x, y = z[dup[0]].real, z[dup[0]].imag
        raise DuplicatePointError(f"duplicate point at ({x!r}, {y!r})")


def build(points) -> Triangulation:
    """Build the Delaunay triangulation of ``points``.

    The result is deterministic for a fixed input order; exact cocircular
    ties are broken by the index-ordered symbolic perturbation, so any input
    in generic position gives the same edge set under relabeling.
    """
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be an (n, 2) array-like")
    if len(pts) < 3:
        raise DegenerateInputError("need at least 3 points")
    if not np.isfinite(pts).all():
        raise ValueError("points must be finite")
    _check_duplicates(pts)
    order = _insertion_order(pts)
    tris, hull, edges, indptr, indices = _kernel.triangulate(
        pts[:, 0].copy(), pts[:, 1].copy(), order
    )
    return Triangulation(pts.copy(), tris, edges, np.asarray(hull, dtype=bool),
                         indptr, indices)


def circumdisks(t: Triangulation) -> tuple[np.ndarray, np.ndarray]:
    """Circumcenters (t, 2) and squared radii (t,) of all triangles."""
    p = t.points
    a = p[t.triangles[:, 0]]
    b = p[t.triangles[:, 1]]
    c = p[t.triangles[:, 2]]
    d1 = b - a
    d2 = c - a
    l1 = (d1 * d1).sum(axis=1)
    l2 = (d2 * d2).sum(axis=1)
    den = 2.0 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])
    ux = a[:, 0] + (d2[:, 1] * l1 - d1[:, 1] * l2) / den
    uy = a[:, 1] + (d1[:, 0] * l2 - d2[:, 0] * l1) / den
    centers = np.stack([ux, uy], axis=1)
    r2 = ((p[t.triangles[:, 0]] - centers) ** 2).sum(axis=1)
    return centers, r2
