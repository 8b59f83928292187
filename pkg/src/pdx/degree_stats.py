"""Window-restricted degree statistics.

Degrees are only trusted for boundary-safe vertices: vertices whose flower
(union of incident circumdisks) fits inside the padded sampling box.  For
those the degree provably equals the degree in the Delaunay graph of the
full infinite process, because points added outside the flower can never
change the vertex's star.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from pdx.delaunay import Triangulation, circumdisks
from pdx.sampling import Sample, Window

NEG_INF = float("-inf")

RECORD_DTYPE = np.dtype([
    ("vertex", np.int32),
    ("degree", np.int32),
    ("in_core", np.bool_),
    ("safe", np.bool_),
])


@dataclass(frozen=True)
class DegreeRecord:
    vertex: int
    degree: int
    in_core_window: bool
    boundary_safe: bool


@dataclass(frozen=True)
class Box:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if self.xmax < self.xmin or self.ymax < self.ymin:
            raise ValueError("box has negative extent")

    @property
    def area(self) -> float:
        return (self.xmax - self.xmin) * (self.ymax - self.ymin)

    def contains(self, pts: np.ndarray) -> np.ndarray:
        return ((pts[:, 0] >= self.xmin) & (pts[:, 0] <= self.xmax)
                & (pts[:, 1] >= self.ymin) & (pts[:, 1] <= self.ymax))


def core_box(window: Window) -> Box:
    return Box(0.0, 0.0, window.side, window.side)


def degree_records(t: Triangulation, window: Window) -> np.ndarray:
    """Structured array of (vertex, degree, in_core, safe) for all vertices."""
    n = t.n_vertices
    s = window.side
    p = window.pad
    centers, r2 = circumdisks(t)
    r = np.sqrt(r2)
    disk_ok = ((centers[:, 0] - r >= -p) & (centers[:, 0] + r <= s + p)
               & (centers[:, 1] - r >= -p) & (centers[:, 1] + r <= s + p))
    safe = np.ones(n, dtype=bool)
    bad = t.triangles[~disk_ok]
    if len(bad):
        safe[np.unique(bad.ravel())] = False
    safe &= ~t.hull
    rec = np.empty(n, dtype=RECORD_DTYPE)
    rec["vertex"] = np.arange(n, dtype=np.int32)
    rec["degree"] = t.degrees()
    rec["in_core"] = core_box(window).contains(t.points)
    rec["safe"] = safe
    return rec


def records_as_dataclasses(rec: np.ndarray) -> list[DegreeRecord]:
    return [
        DegreeRecord(int(r["vertex"]), int(r["degree"]), bool(r["in_core"]),
                     bool(r["safe"]))
        for r in rec
    ]


def _region_mask(rec, t, window, region: Box):
    core = core_box(window)
    if (region.xmin < core.xmin or region.ymin < core.ymin
            or region.xmax > core.xmax or region.ymax > core.ymax):
        raise ValueError("region must lie inside the core window")
    return rec["safe"] & rec["in_core"] & region.contains(t.points)


def max_degree(t: Triangulation, window: Window, region: Box,
               rec: np.ndarray | None = None):
    """Maximum degree over boundary-safe vertices in the region, or -inf."""
    rec = degree_records(t, window) if rec is None else rec
    m = _region_mask(rec, t, window, region)
    if not m.any():
        return NEG_INF
    return int(rec["degree"][m].max())


def exceedance_count(t: Triangulation, window: Window, region: Box, k: int,
                     rec: np.ndarray | None = None) -> int:
    """Number of boundary-safe vertices in the region with degree >= k."""
    rec = degree_records(t, window) if rec is None else rec
    m = _region_mask(rec, t, window, region)
    return int((rec["degree"][m] >= k).sum())


def cluster_count(t: Triangulation, window: Window, region: Box, k: int,
                  m: int = 5, rec: np.ndarray | None = None) -> int:
    """1 if at least m region vertices have degree >= k, else 0."""
    if m < 1:
        raise ValueError("cluster size m must be >= 1")
    return 1 if exceedance_count(t, window, region, k, rec) >= m else 0


@dataclass(frozen=True)
class GridSubdivision:
    """Partition of the core window into N x N closed cells of area about
    alpha*log(rho); cell distance is the max-coordinate metric."""

    n_cells_per_side: int
    alpha: float
    cell_side: float
    dim: int = 2
    # dependence range from the mixing lemma, stored for diagnostics
    dependence_range: int = field(default=8)

    def cell_box(self, cell: tuple[int, int]) -> Box:
        i, j = cell
        if not (1 <= i <= self.n_cells_per_side
                and 1 <= j <= self.n_cells_per_side):
            raise ValueError(f"cell {cell} out of range")
        return Box((i - 1) * self.cell_side, (j - 1) * self.cell_side,
                   i * self.cell_side, j * self.cell_side)


def subdivide(window: Window, alpha: float) -> GridSubdivision:
    if alpha <= 2:
        raise ValueError("alpha must be > 2")
    rho = window.rho
    n = int(math.floor((rho / (alpha * math.log(rho))) ** (1.0 / window.dim)))
    if n < 1:
        raise ValueError("rho too small for this alpha: no cells")
    d = window.dim
    return GridSubdivision(
        n_cells_per_side=n,
        alpha=alpha,
        cell_side=window.side / n,
        dim=d,
        dependence_range=4 * (int(math.isqrt(d)) + 1),
    )


def cell_of(g: GridSubdivision, p) -> tuple[int, int]:
    """1-based cell index of a core-window point."""
    side = g.cell_side * g.n_cells_per_side
    tol = side * 1e-12  # cell_side*n can differ from the window side by ulps
    x, y = p[0], p[1]
    if not (-tol <= x <= side + tol and -tol <= y <= side + tol):
        raise ValueError("point outside the core window")
    i = min(int(x / g.cell_side) + 1, g.n_cells_per_side)
    j = min(int(y / g.cell_side) + 1, g.n_cells_per_side)
    return (i, j)


def cell_distance(a: tuple[int, int], b: tuple[int, int]) -> int:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def _cell_ids(g: GridSubdivision, pts: np.ndarray) -> np.ndarray:
    n = g.n_cells_per_side
    cx = np.minimum((pts[:, 0] / g.cell_side).astype(np.int64), n - 1)
    cy = np.minimum((pts[:, 1] / g.cell_side).astype(np.int64), n - 1)
    return cx * n + cy


def e_rho_holds(sample: Sample, g: GridSubdivision) -> bool:
    """True iff every grid cell contains at least one sample point."""
    pts = sample.points
    core = (pts[:, 0] >= 0) & (pts[:, 0] <= sample.window.side) \
        & (pts[:, 1] >= 0) & (pts[:, 1] <= sample.window.side)
    ids = _cell_ids(g, pts[core])
    counts = np.bincount(ids, minlength=g.n_cells_per_side ** 2)
    return bool((counts > 0).all())


def max_cell_exceedances(t: Triangulation, window: Window,
                         g: GridSubdivision, k: int,
                         rec: np.ndarray | None = None) -> int:
    """max over grid cells of the number of safe vertices with degree >= k."""
    rec = degree_records(t, window) if rec is None else rec
    m = rec["safe"] & rec["in_core"] & (rec["degree"] >= k)
    if not m.any():
        return 0
    ids = _cell_ids(g, t.points[m])
    return int(np.bincount(ids, minlength=g.n_cells_per_side ** 2).max())


@dataclass
class Histogram:
    counts: dict[int, int] = field(default_factory=dict)
    total: int = 0

    def add(self, value: int, count: int = 1) -> None:
        self.counts[value] = self.counts.get(value, 0) + count
        self.total += count

    def merge(self, other: "Histogram") -> "Histogram":
        out = Histogram(dict(self.counts), self.total)
        for k, c in other.counts.items():
            out.counts[k] = out.counts.get(k, 0) + c
        out.total += other.total
        return out

    def pmf(self) -> dict[int, float]:
        return {k: c / self.total for k, c in sorted(self.counts.items())}

    def mean(self) -> float:
        return sum(k * c for k, c in self.counts.items()) / self.total

    @classmethod
    def from_degrees(cls, degrees) -> "Histogram":
        h = cls()
        vals, counts = np.unique(np.asarray(degrees), return_counts=True)
        for v, c in zip(vals, counts):
            h.counts[int(v)] = int(c)
        h.total = int(counts.sum())
        return h


def empirical_pmf(records) -> Histogram:
    """Histogram of degrees from boundary-safe core-window records."""
    if isinstance(records, np.ndarray):
        if len(records) == 0:
            raise ValueError("no records")
        return Histogram.from_degrees(records["degree"])
    records = list(records)
    if not records:
        raise ValueError("no records")
    h = Histogram()
    for r in records:
        h.add(int(r.degree))
    return h
