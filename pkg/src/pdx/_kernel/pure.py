"""Pure-Python triangulation kernel.

Same algorithm, predicates and tie-break rules as the compiled kernel, so
both backends produce identical triangulations (including on degenerate
inputs); this one exists as the fallback when the extension module is not
built, and as a readable reference.  Expect roughly two orders of magnitude
less throughput.
"""

import numpy as np

from pdx.errors import DegenerateInputError
from pdx._kernel.exact import (
    incircle_exact,
    incircle_perturbed_exact,
    orient2d_exact,
)

BACKEND = "pure"

_EPS = 1.1102230246251565e-16  # 2**-53
_CCW_A = (3.0 + 16.0 * _EPS) * _EPS
_ICC_A = (10.0 + 96.0 * _EPS) * _EPS
_GUARD = 1e-280
_INF = float("inf")

_NX = (1, 2, 0)
_PR = (2, 0, 1)


def orient2d_sign(ax, ay, bx, by, cx, cy):
    """Exact sign of twice the signed area of (a, b, c)."""
    detl = (ax - cx) * (by - cy)
    detr = (ay - cy) * (bx - cx)
    det = detl - detr
    if detl > 0.0:
        if detr <= 0.0:
            return 1
        detsum = detl + detr
    elif detl < 0.0:
        if detr >= 0.0:
            return -1
        detsum = -detl - detr
    else:
        if detr > _GUARD:
            return -1
        if detr < -_GUARD:
            return 1
        return orient2d_exact(ax, ay, bx, by, cx, cy)
    if _GUARD <= detsum < _INF:
        if det >= _CCW_A * detsum:
            return 1
        if -det >= _CCW_A * detsum:
            return -1
    return orient2d_exact(ax, ay, bx, by, cx, cy)


def incircle_sign(ax, ay, bx, by, cx, cy, px, py):
    """Exact in-circle sign (+1 strictly inside for CCW (a, b, c))."""
    adx = ax - px
    ady = ay - py
    bdx = bx - px
    bdy = by - py
    cdx = cx - px
    cdy = cy - py
    bdxcdy = bdx * cdy
    cdxbdy = cdx * bdy
    alift = adx * adx + ady * ady
    cdxady = cdx * ady
    adxcdy = adx * cdy
    blift = bdx * bdx + bdy * bdy
    adxbdy = adx * bdy
    bdxady = bdx * ady
    clift = cdx * cdx + cdy * cdy
    det = (alift * (bdxcdy - cdxbdy)
           + blift * (cdxady - adxcdy)
           + clift * (adxbdy - bdxady))
    permanent = ((abs(bdxcdy) + abs(cdxbdy)) * alift
                 + (abs(cdxady) + abs(adxcdy)) * blift
                 + (abs(adxbdy) + abs(bdxady)) * clift)
    if _GUARD <= permanent < _INF:
        errbound = _ICC_A * permanent
        if det > errbound:
            return 1
        if -det > errbound:
            return -1
    return incircle_exact(ax, ay, bx, by, cx, cy, px, py)


def incircle_decide(ax, ay, ia, bx, by, ib, cx, cy, ic, px, py, ip):
    """In-circle sign with the symbolic tie-break; never 0 for a real triangle."""
    s = incircle_sign(ax, ay, bx, by, cx, cy, px, py)
    if s != 0:
        return s
    return incircle_perturbed_exact(ax, ay, ia, bx, by, ib, cx, cy, ic, px, py, ip)


class _Builder:
    def __init__(self, xs, ys):
        self.xs = xs
        self.ys = ys
        self.n = len(xs)
        self.ghost = self.n
        self.tv = []        # flat vertex ids, 3 per triangle
        self.tn = []        # packed neighbour links: 3*tri + slot
        self.gsl = []       # ghost slot per triangle, -1 if real
        self.visited = []
        self.incav = []
        self.freelist = []
        self.stamp = 0
        self.vstamp = [-1] * (self.n + 1)
        self.vedge = [0] * (self.n + 1)
        self.vstampc = 0
        self.last = 0

    def _alloc_tri(self, a, b, c):
        if self.freelist:
            t = self.freelist.pop()
            self.tv[3 * t:3 * t + 3] = (a, b, c)
        else:
            t = len(self.gsl)
            self.tv.extend((a, b, c))
            self.tn.extend((0, 0, 0))
            self.gsl.append(-1)
            self.visited.append(-1)
            self.incav.append(0)
        g = self.ghost
        self.gsl[t] = 0 if a == g else (1 if b == g else (2 if c == g else -1))
        return t

    def _ghost_region(self, t, qx, qy):
        j = self.gsl[t]
        u = self.tv[3 * t + _NX[j]]
        v = self.tv[3 * t + _PR[j]]
        ux, uy = self.xs[u], self.ys[u]
        vx, vy = self.xs[v], self.ys[v]
        o = orient2d_sign(ux, uy, vx, vy, qx, qy)
        if o > 0:
            return True
        if o < 0:
            return False
        if ux != vx:
            return (ux < qx < vx) or (vx < qx < ux)
        return (uy < qy < vy) or (vy < qy < uy)

    def _in_cavity(self, t, qx, qy, q):
        if self.gsl[t] >= 0:
            return self._ghost_region(t, qx, qy)
        a, b, c = self.tv[3 * t:3 * t + 3]
        xs, ys = self.xs, self.ys
        return incircle_decide(xs[a], ys[a], a, xs[b], ys[b], b,
                               xs[c], ys[c], c, qx, qy, q) > 0

    def _locate(self, qx, qy):
        t = self.last
        if self.gsl[t] >= 0:
            t = self.tn[3 * t + self.gsl[t]] // 3
        xs, ys = self.xs, self.ys
        limit = 4 * len(self.gsl) + 64
        for _ in range(limit):
            moved = False
            for j in range(3):
                u = self.tv[3 * t + _NX[j]]
                v = self.tv[3 * t + _PR[j]]
                if orient2d_sign(xs[u], ys[u], xs[v], ys[v], qx, qy) < 0:
                    t2 = self.tn[3 * t + j] // 3
                    if self.gsl[t2] >= 0:
                        return t2
                    t = t2
                    moved = True
                    break
            if not moved:
                return t
        raise RuntimeError("point location failed to terminate")

    def _hull_scan(self, qx, qy):
        freed = set(self.freelist)
        for t in range(len(self.gsl)):
            if t in freed or self.gsl[t] < 0:
                continue
            if self._ghost_region(t, qx, qy):
                return t
        raise RuntimeError("no ghost region contains the query point")

    def _insert(self, q):
        qx, qy = self.xs[q], self.ys[q]
        t = self._locate(qx, qy)
        if self.gsl[t] >= 0 and not self._ghost_region(t, qx, qy):
            t = self._hull_scan(qx, qy)

        self.stamp += 1
        stamp = self.stamp
        visited, incav, tn, tv = self.visited, self.incav, self.tn, self.tv
        visited[t] = stamp
        incav[t] = 1
        stack = [t]
        cav = [t]
        bu, bv, bout = [], [], []
        while stack:
            t1 = stack.pop()
            for j in range(3):
                packed = tn[3 * t1 + j]
                t2 = packed // 3
                if visited[t2] == stamp:
                    if incav[t2]:
                        continue
                else:
                    visited[t2] = stamp
                    if self._in_cavity(t2, qx, qy, q):
                        incav[t2] = 1
                        stack.append(t2)
                        cav.append(t2)
                        continue
                    incav[t2] = 0
                bu.append(tv[3 * t1 + _NX[j]])
                bv.append(tv[3 * t1 + _PR[j]])
                bout.append(packed)

        self.freelist.extend(cav)

        self.vstampc += 1
        newt = []
        for e, u in enumerate(bu):
            nt = self._alloc_tri(u, bv[e], q)
            newt.append(nt)
            self.vstamp[u] = self.vstampc
            self.vedge[u] = e
        tn = self.tn
        real_new = -1
        for e, nt in enumerate(newt):
            packed = bout[e]
            tn[3 * nt + 2] = packed
            tn[packed] = 3 * nt + 2
            if self.vstamp[bv[e]] != self.vstampc:
                raise RuntimeError("cavity boundary is not a closed cycle")
            nt2 = newt[self.vedge[bv[e]]]
            tn[3 * nt + 0] = 3 * nt2 + 1
            tn[3 * nt2 + 1] = 3 * nt + 0
            if real_new < 0 and self.gsl[nt] < 0:
                real_new = nt
        if real_new < 0:
            raise RuntimeError("insertion produced no real triangle")
        self.last = real_new

    def _init_triangle(self, a, b, c):
        t = self._alloc_tri(a, b, c)
        gab = self._alloc_tri(b, a, self.ghost)
        gbc = self._alloc_tri(c, b, self.ghost)
        gca = self._alloc_tri(a, c, self.ghost)
        tn = self.tn
        tn[3 * t + 0] = 3 * gbc + 2
        tn[3 * gbc + 2] = 3 * t + 0
        tn[3 * t + 1] = 3 * gca + 2
        tn[3 * gca + 2] = 3 * t + 1
        tn[3 * t + 2] = 3 * gab + 2
        tn[3 * gab + 2] = 3 * t + 2
        tn[3 * gab + 0] = 3 * gca + 1
        tn[3 * gca + 1] = 3 * gab + 0
        tn[3 * gab + 1] = 3 * gbc + 0
        tn[3 * gbc + 0] = 3 * gab + 1
        tn[3 * gbc + 1] = 3 * gca + 0
        tn[3 * gca + 0] = 3 * gbc + 1
        self.last = t

    def run(self, order):
        xs, ys = self.xs, self.ys
        a, b = order[0], order[1]
        c = -1
        for j in range(2, self.n):
            k = order[j]
            s = orient2d_sign(xs[a], ys[a], xs[b], ys[b], xs[k], ys[k])
            if s != 0:
                c = k
                break
        if c < 0:
            raise DegenerateInputError("all points are collinear")
        if s < 0:
            self._init_triangle(a, c, b)
        else:
            self._init_triangle(a, b, c)
        used = bytearray(self.n)
        used[a] = used[b] = used[c] = 1
        for k in order:
            if used[k]:
                continue
            self._insert(k)
        return self._extract()

    def _extract(self):
        freed = set(self.freelist)
        tv, tn, gsl = self.tv, self.tn, self.gsl
        hull = np.zeros(self.n, dtype=np.bool_)
        tris = []
        edges = []
        for t in range(len(gsl)):
            if t in freed:
                continue
            j = gsl[t]
            if j >= 0:
                hull[tv[3 * t + _NX[j]]] = True
                hull[tv[3 * t + _PR[j]]] = True
                continue
            a, b, c = tv[3 * t:3 * t + 3]
            if b < a and b < c:
                a, b, c = b, c, a
            elif c < a and c < b:
                a, b, c = c, a, b
            tris.append((a, b, c))
            for j in range(3):
                nbr = tn[3 * t + j] // 3
                if gsl[nbr] >= 0 or nbr > t:
                    u = tv[3 * t + _NX[j]]
                    v = tv[3 * t + _PR[j]]
                    edges.append((u, v) if u < v else (v, u))
        tri_arr = np.array(tris, dtype=np.int32).reshape(-1, 3)
        edge_arr = np.array(edges, dtype=np.int32).reshape(-1, 2)
        indptr, indices = _adjacency_csr(self.n, edge_arr)
        return tri_arr, hull, edge_arr, indptr, indices


def _adjacency_csr(n, edges):
    """Sorted-per-vertex CSR adjacency from (u, v) edge rows."""
    counts = np.bincount(edges.ravel(), minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    both = np.concatenate([edges, edges[:, ::-1]]) if len(edges) else edges
    order = np.lexsort((both[:, 1], both[:, 0]))
    indices = both[order, 1].astype(np.int32)
    return indptr, indices


def triangulate(xs, ys, order):
    """Pure-Python counterpart of the compiled ``triangulate``."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    order = np.ascontiguousarray(order, dtype=np.int32)
    if xs.shape[0] < 3:
        raise DegenerateInputError("need at least 3 points")
    builder = _Builder(xs.tolist(), ys.tolist())
    return builder.run(order.tolist())
