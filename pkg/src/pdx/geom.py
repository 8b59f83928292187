"""Exact-decision planar primitives: orientation, in-circle, circumdisk.

Signs returned by :func:`orient2d` and :func:`incircle` are exact decisions
(a floating-point filter backed by integer arithmetic), so downstream
triangulation never suffers from rounding-inverted predicates.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from pdx import _kernel
from pdx.errors import DegenerateInputError


class Point2(NamedTuple):
    x: float
    y: float


class Disk(NamedTuple):
    center: Point2
    radius_sq: float


def orient2d(a, b, c) -> int:
    """Sign of twice the signed area of (a, b, c): +1 CCW, -1 CW, 0 collinear."""
    return _kernel.orient2d_sign(a[0], a[1], b[0], b[1], c[0], c[1])


def incircle(a, b, c, p) -> int:
    """+1 if p is strictly inside the circle through (a, b, c), -1 strictly
    outside, 0 cocircular.  (a, b, c) are expected counter-clockwise; a
    clockwise triple flips the sign.
    """
    if _kernel.orient2d_sign(a[0], a[1], b[0], b[1], c[0], c[1]) == 0:
        raise DegenerateInputError("incircle of collinear points is undefined")
    return _kernel.incircle_sign(a[0], a[1], b[0], b[1], c[0], c[1], p[0], p[1])


def incircle_perturbed(a, ia, b, ib, c, ic, p, ip) -> int:
    """Like :func:`incircle` but exact cocircular ties are broken by the
    index-ordered symbolic perturbation; never returns 0."""
    if _kernel.orient2d_sign(a[0], a[1], b[0], b[1], c[0], c[1]) == 0:
        raise DegenerateInputError("incircle of collinear points is undefined")
    return _kernel.incircle_decide(
        a[0], a[1], ia, b[0], b[1], ib, c[0], c[1], ic, p[0], p[1], ip
    )


def circumcenter(a, b, c) -> Point2:
    """Circumcenter in floating point; raises for collinear input."""
    ax, ay = a[0], a[1]
    bx, by = b[0], b[1]
    cx, cy = c[0], c[1]
    dx1 = bx - ax
    dy1 = by - ay
    dx2 = cx - ax
    dy2 = cy - ay
    d = 2.0 * (dx1 * dy2 - dy1 * dx2)
    if d == 0.0 or _kernel.orient2d_sign(ax, ay, bx, by, cx, cy) == 0:
        raise DegenerateInputError("circumdisk of collinear points is undefined")
    l1 = dx1 * dx1 + dy1 * dy1
    l2 = dx2 * dx2 + dy2 * dy2
    ux = ax + (dy2 * l1 - dy1 * l2) / d
    uy = ay + (dx1 * l2 - dx2 * l1) / d
    return Point2(ux, uy)


def circumdisk(a, b, c) -> Disk:
    """Open circumdisk through a, b, c (center and squared radius)."""
    ctr = circumcenter(a, b, c)
    r2 = max(
        (a[0] - ctr.x) ** 2 + (a[1] - ctr.y) ** 2,
        (b[0] - ctr.x) ** 2 + (b[1] - ctr.y) ** 2,
        (c[0] - ctr.x) ** 2 + (c[1] - ctr.y) ** 2,
    )
    return Disk(ctr, r2)


def disk_contains(d: Disk, p, strict: bool = True) -> bool:
    dx = p[0] - d.center.x
    dy = p[1] - d.center.y
    rr = dx * dx + dy * dy
    return rr < d.radius_sq if strict else rr <= d.radius_sq


def disk_radius(d: Disk) -> float:
    return math.sqrt(d.radius_sq)
