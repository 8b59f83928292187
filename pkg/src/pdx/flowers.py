"""Voronoi flowers and their area (the Phi-content of a vertex).

The flower of an interior vertex is the union of the circumdisks of its
incident triangles.  The exact area comes from an arc decomposition of the
union boundary integrated with Green's theorem; a petal count is the vertex
degree, so the O(m^2 log m) decomposition is cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from pdx.delaunay import Triangulation
from pdx.errors import UnboundedFlowerError
from pdx.geom import Disk, Point2, circumdisk

_TWO_PI = 2.0 * math.pi
# Pairs whose intersection discriminant falls within this relative tolerance
# are treated as tangent (no crossing).
_TANGENT_EPS = 1e-12


@dataclass(frozen=True)
class Flower:
    nucleus: int
    petals: tuple[Disk, ...]
    area: float


def voronoi_flower(t: Triangulation, v: int) -> Flower:
    """Flower of a non-hull vertex: one petal per incident triangle."""
    if not 0 <= v < t.n_vertices:
        raise IndexError(f"vertex {v} out of range")
    if t.hull[v]:
        raise UnboundedFlowerError(
            f"vertex {v} is on the convex hull; its flower is unbounded"
        )
    petals = []
    for ti in t.incident_triangles(v):
        a, b, c = t.triangles[ti]
        petals.append(
            circumdisk(Point2(*t.points[a]), Point2(*t.points[b]),
                       Point2(*t.points[c]))
        )
    petals = tuple(petals)
    return Flower(nucleus=v, petals=petals, area=disk_union_area(petals))


def disk_union_area(disks) -> float:
    """Exact area of a union of disks via boundary-arc integration."""
    items = []
    seen = set()
    for d in disks:
        cx, cy = d.center[0], d.center[1]
        r2 = d.radius_sq
        if r2 <= 0.0:
            continue
        key = (cx, cy, r2)
        if key in seen:
            continue
        seen.add(key)
        items.append((cx, cy, math.sqrt(r2)))
    m = len(items)
    if m == 0:
        return 0.0

    covered = [False] * m
    for i in range(m):
        xi, yi, ri = items[i]
        for j in range(m):
            if i == j or covered[j]:
                continue
            xj, yj, rj = items[j]
            d = math.hypot(xi - xj, yi - yj)
            if d + ri <= rj:
                covered[i] = True
                break

    total = 0.0
    for i in range(m):
        if covered[i]:
            continue
        xi, yi, ri = items[i]
        intervals = []
        for j in range(m):
            if i == j or covered[j]:
                continue
            xj, yj, rj = items[j]
            d = math.hypot(xi - xj, yi - yj)
            if d >= ri + rj or d + rj <= ri:
                continue  # disjoint/tangent, or j inside i: no arc of i covered
            arg = (d * d + ri * ri - rj * rj) / (2.0 * d * ri)
            if arg >= 1.0 - _TANGENT_EPS:
                continue
            arg = max(arg, -1.0)
            half = math.acos(arg)
            alpha = math.atan2(yj - yi, xj - xi)
            intervals.append((alpha - half, alpha + half))
        total += _arc_contributions(xi, yi, ri, intervals)
    return total


def _arc_contributions(cx, cy, r, covered_intervals) -> float:
    """Green's-theorem contribution of the uncovered arcs of one circle."""
    if not covered_intervals:
        return math.pi * r * r
    # normalize to [0, 2pi), split wrap-around intervals, merge
    segs = []
    for a, b in covered_intervals:
        if b - a >= _TWO_PI:
            return 0.0
        a %= _TWO_PI
        b %= _TWO_PI
        if a <= b:
            segs.append((a, b))
        else:
            segs.append((a, _TWO_PI))
            segs.append((0.0, b))
    segs.sort()
    merged = [list(segs[0])]
    for a, b in segs[1:]:
        if a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    # complement on the circle = boundary arcs
    area = 0.0
    if merged[0][0] > 0.0 or merged[-1][1] < _TWO_PI:
        # arc from last covered end around 0 to first covered start
        area += _green_arc(cx, cy, r, merged[-1][1], merged[0][0] + _TWO_PI)
    for k in range(len(merged) - 1):
        area += _green_arc(cx, cy, r, merged[k][1], merged[k + 1][0])
    return area


def _green_arc(cx, cy, r, t1, t2) -> float:
    dt = t2 - t1
    return 0.5 * (
        r * r * dt
        + cx * r * (math.sin(t2) - math.sin(t1))
        + cy * r * (math.cos(t1) - math.cos(t2))
    )


@dataclass(frozen=True)
class PhiEstimate:
    value: float
    stderr: float


def phi_content(flower: Flower, method: str = "exact", n: int | None = None,
                seed: int | None = None):
    """Area of the flower.

    ``method="exact"`` returns a float from the arc decomposition;
    ``method="montecarlo"`` returns a :class:`PhiEstimate` from n uniform
    points in the petals' bounding box.
    """
    if method == "exact":
        return disk_union_area(flower.petals)
    if method != "montecarlo":
        raise ValueError(f"unknown method {method!r}")
    if not n or n <= 0:
        raise ValueError("montecarlo needs n >= 1")
    rng = np.random.default_rng(np.random.SeedSequence([seed or 0, flower.nucleus]))
    cx = np.array([d.center[0] for d in flower.petals])
    cy = np.array([d.center[1] for d in flower.petals])
    r2 = np.array([d.radius_sq for d in flower.petals])
    r = np.sqrt(r2)
    x0, x1 = (cx - r).min(), (cx + r).max()
    y0, y1 = (cy - r).min(), (cy + r).max()
    box = (x1 - x0) * (y1 - y0)
    hits = 0
    remaining = n
    while remaining > 0:
        chunk = min(remaining, 1 << 19)
        px = rng.random(chunk) * (x1 - x0) + x0
        py = rng.random(chunk) * (y1 - y0) + y0
        inside = np.zeros(chunk, dtype=bool)
        for k in range(len(cx)):
            inside |= (px - cx[k]) ** 2 + (py - cy[k]) ** 2 < r2[k]
        hits += int(inside.sum())
        remaining -= chunk
    p = hits / n
    return PhiEstimate(value=p * box, stderr=box * math.sqrt(p * (1.0 - p) / n))
