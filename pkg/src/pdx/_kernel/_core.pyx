# cython: language_level=3
# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled triangulation kernel.

Predicates run a floating-point filter first (Shewchuk's stage-A error
bounds) and fall back to exact integer arithmetic only when the filter
cannot certify the sign.  The incremental Bowyer-Watson builder keeps one
ghost vertex so points outside the current hull need no special casing, and
walks to each insertion site from the previously created triangle; callers
feed points in a spatially coherent order to keep walks short.
"""

from libc.math cimport fabs
from libc.stdlib cimport free, malloc

import numpy as np

cimport numpy as cnp

from pdx.errors import DegenerateInputError
from pdx._kernel.exact import (
    incircle_exact,
    incircle_perturbed_exact,
    orient2d_exact,
)

cnp.import_array()

BACKEND = "compiled"

cdef double EPS = 1.1102230246251565e-16  # 2**-53
cdef double CCW_A = (3.0 + 16.0 * EPS) * EPS
cdef double ICC_A = (10.0 + 96.0 * EPS) * EPS
# Below this magnitude products may have underflowed and the filter's error
# analysis no longer applies; take the exact path instead.
cdef double GUARD = 1e-280


cdef int _orient(double ax, double ay, double bx, double by,
                 double cx, double cy) except? -9:
    cdef double detl = (ax - cx) * (by - cy)
    cdef double detr = (ay - cy) * (bx - cx)
    cdef double det = detl - detr
    cdef double detsum
    if detl > 0.0:
        if detr <= 0.0:
            return 1
        detsum = detl + detr
    elif detl < 0.0:
        if detr >= 0.0:
            return -1
        detsum = -detl - detr
    else:
        if detr > GUARD:
            return -1
        if detr < -GUARD:
            return 1
        return orient2d_exact(ax, ay, bx, by, cx, cy)
    if detsum >= GUARD and detsum == detsum and detsum != float("inf"):
        if det >= CCW_A * detsum:
            return 1
        if -det >= CCW_A * detsum:
            return -1
    return orient2d_exact(ax, ay, bx, by, cx, cy)


cdef int _incircle(double ax, double ay, double bx, double by,
                   double cx, double cy, double px, double py) except? -9:
    cdef double adx = ax - px
    cdef double ady = ay - py
    cdef double bdx = bx - px
    cdef double bdy = by - py
    cdef double cdx = cx - px
    cdef double cdy = cy - py
    cdef double bdxcdy = bdx * cdy
    cdef double cdxbdy = cdx * bdy
    cdef double alift = adx * adx + ady * ady
    cdef double cdxady = cdx * ady
    cdef double adxcdy = adx * cdy
    cdef double blift = bdx * bdx + bdy * bdy
    cdef double adxbdy = adx * bdy
    cdef double bdxady = bdx * ady
    cdef double clift = cdx * cdx + cdy * cdy
    cdef double det = (alift * (bdxcdy - cdxbdy)
                       + blift * (cdxady - adxcdy)
                       + clift * (adxbdy - bdxady))
    cdef double permanent = ((fabs(bdxcdy) + fabs(cdxbdy)) * alift
                             + (fabs(cdxady) + fabs(adxcdy)) * blift
                             + (fabs(adxbdy) + fabs(bdxady)) * clift)
    cdef double errbound = ICC_A * permanent
    if permanent >= GUARD and permanent == permanent and permanent != float("inf"):
        if det > errbound:
            return 1
        if -det > errbound:
            return -1
    return incircle_exact(ax, ay, bx, by, cx, cy, px, py)


def orient2d_sign(double ax, double ay, double bx, double by,
                  double cx, double cy):
    """Exact sign of twice the signed area of (a, b, c)."""
    return _orient(ax, ay, bx, by, cx, cy)


def incircle_sign(double ax, double ay, double bx, double by,
                  double cx, double cy, double px, double py):
    """Exact in-circle sign (+1 strictly inside for CCW (a, b, c))."""
    return _incircle(ax, ay, bx, by, cx, cy, px, py)


def incircle_decide(double ax, double ay, int ia, double bx, double by, int ib,
                    double cx, double cy, int ic, double px, double py, int ip):
    """In-circle sign with the symbolic tie-break; never returns 0 for a
    non-degenerate triangle."""
    cdef int s = _incircle(ax, ay, bx, by, cx, cy, px, py)
    if s != 0:
        return s
    return incircle_perturbed_exact(ax, ay, ia, bx, by, ib, cx, cy, ic,
                                    px, py, ip)


cdef int NX[3]
cdef int PR[3]
NX[0] = 1
NX[1] = 2
NX[2] = 0
PR[0] = 2
PR[1] = 0
PR[2] = 1


cdef class _Builder:
    cdef double* xs
    cdef double* ys
    cdef int n
    cdef int ghost
    cdef int cap
    cdef int ntri
    cdef int* tv            # vertex ids, 3 per triangle
    cdef int* tn            # packed neighbour links: 3*tri + slot
    cdef signed char* gsl   # slot of the ghost vertex, -1 for real triangles
    cdef int* visited
    cdef unsigned char* incav
    cdef int* freelist
    cdef int nfree
    cdef int stamp
    cdef int* vstamp        # per vertex (incl. ghost): boundary-cycle stamp
    cdef int* vedge         # boundary edge index starting at vertex
    cdef int vstampc
    cdef int* bu
    cdef int* bv
    cdef int* bout
    cdef int* newt
    cdef int nb
    cdef int* stack
    cdef int* cav
    cdef int last
    cdef object _keep

    def __cinit__(self, cnp.ndarray[cnp.float64_t, ndim=1] xs,
                  cnp.ndarray[cnp.float64_t, ndim=1] ys):
        cdef int n = xs.shape[0]
        self.n = n
        self.ghost = n
        self.cap = 2 * n + 16
        self.ntri = 0
        self.nfree = 0
        self.stamp = 0
        self.vstampc = 0
        self.nb = 0
        self.last = 0
        self._keep = (xs, ys)
        self.xs = <double*> cnp.PyArray_DATA(xs)
        self.ys = <double*> cnp.PyArray_DATA(ys)
        cdef int cap = self.cap
        self.tv = <int*> malloc(cap * 3 * sizeof(int))
        self.tn = <int*> malloc(cap * 3 * sizeof(int))
        self.gsl = <signed char*> malloc(cap)
        self.visited = <int*> malloc(cap * sizeof(int))
        self.incav = <unsigned char*> malloc(cap)
        self.freelist = <int*> malloc(cap * sizeof(int))
        self.vstamp = <int*> malloc((n + 1) * sizeof(int))
        self.vedge = <int*> malloc((n + 1) * sizeof(int))
        self.bu = <int*> malloc((cap + 8) * sizeof(int))
        self.bv = <int*> malloc((cap + 8) * sizeof(int))
        self.bout = <int*> malloc((cap + 8) * sizeof(int))
        self.newt = <int*> malloc((cap + 8) * sizeof(int))
        self.stack = <int*> malloc(cap * sizeof(int))
        self.cav = <int*> malloc(cap * sizeof(int))
        if (self.tv == NULL or self.tn == NULL or self.gsl == NULL
                or self.visited == NULL or self.incav == NULL
                or self.freelist == NULL or self.vstamp == NULL
                or self.vedge == NULL or self.bu == NULL or self.bv == NULL
                or self.bout == NULL or self.newt == NULL
                or self.stack == NULL or self.cav == NULL):
            raise MemoryError
        cdef int i
        for i in range(cap):
            self.visited[i] = -1
        for i in range(n + 1):
            self.vstamp[i] = -1

    def __dealloc__(self):
        free(self.tv)
        free(self.tn)
        free(self.gsl)
        free(self.visited)
        free(self.incav)
        free(self.freelist)
        free(self.vstamp)
        free(self.vedge)
        free(self.bu)
        free(self.bv)
        free(self.bout)
        free(self.newt)
        free(self.stack)
        free(self.cav)

    cdef int _alloc_tri(self, int a, int b, int c) except -1:
        cdef int t
        if self.nfree > 0:
            self.nfree -= 1
            t = self.freelist[self.nfree]
        else:
            if self.ntri >= self.cap:
                raise RuntimeError("triangle capacity exceeded")
            t = self.ntri
            self.ntri += 1
        self.tv[3 * t] = a
        self.tv[3 * t + 1] = b
        self.tv[3 * t + 2] = c
        if a == self.ghost:
            self.gsl[t] = 0
        elif b == self.ghost:
            self.gsl[t] = 1
        elif c == self.ghost:
            self.gsl[t] = 2
        else:
            self.gsl[t] = -1
        return t

    cdef int _ghost_region(self, int t, double qx, double qy, int q) except? -9:
        # Ghost triangles own the open half plane left of their directed hull
        # edge plus the open edge itself.
        cdef int j = self.gsl[t]
        cdef int u = self.tv[3 * t + NX[j]]
        cdef int v = self.tv[3 * t + PR[j]]
        cdef double ux = self.xs[u]
        cdef double uy = self.ys[u]
        cdef double vx = self.xs[v]
        cdef double vy = self.ys[v]
        cdef int o = _orient(ux, uy, vx, vy, qx, qy)
        if o > 0:
            return 1
        if o < 0:
            return 0
        if ux != vx:
            return 1 if (ux < qx < vx) or (vx < qx < ux) else 0
        return 1 if (uy < qy < vy) or (vy < qy < uy) else 0

    cdef int _in_cavity(self, int t, double qx, double qy, int q) except? -9:
        cdef int a, b, c
        if self.gsl[t] >= 0:
            return self._ghost_region(t, qx, qy, q)
        a = self.tv[3 * t]
        b = self.tv[3 * t + 1]
        c = self.tv[3 * t + 2]
        cdef int s = _incircle(self.xs[a], self.ys[a], self.xs[b], self.ys[b],
                               self.xs[c], self.ys[c], qx, qy)
        if s != 0:
            return 1 if s > 0 else 0
        s = incircle_perturbed_exact(self.xs[a], self.ys[a], a,
                                     self.xs[b], self.ys[b], b,
                                     self.xs[c], self.ys[c], c,
                                     qx, qy, q)
        return 1 if s > 0 else 0

    cdef int _locate(self, double qx, double qy) except -1:
        cdef int t = self.last
        cdef int j, u, v, o, t2
        cdef long steps = 0
        cdef long limit = 4 * <long> self.cap + 64
        cdef bint moved
        if self.gsl[t] >= 0:
            t = self.tn[3 * t + self.gsl[t]] // 3
        while True:
            steps += 1
            if steps > limit:
                raise RuntimeError("point location failed to terminate")
            moved = False
            for j in range(3):
                u = self.tv[3 * t + NX[j]]
                v = self.tv[3 * t + PR[j]]
                o = _orient(self.xs[u], self.ys[u], self.xs[v], self.ys[v],
                            qx, qy)
                if o < 0:
                    t2 = self.tn[3 * t + j] // 3
                    if self.gsl[t2] >= 0:
                        return t2
                    t = t2
                    moved = True
                    break
            if not moved:
                return t

    cdef int _hull_scan(self, double qx, double qy, int q) except -1:
        cdef int t
        cdef unsigned char* freed = <unsigned char*> malloc(self.cap)
        cdef int i
        if freed == NULL:
            raise MemoryError
        for i in range(self.cap):
            freed[i] = 0
        for i in range(self.nfree):
            freed[self.freelist[i]] = 1
        try:
            for t in range(self.ntri):
                if freed[t] or self.gsl[t] < 0:
                    continue
                if self._ghost_region(t, qx, qy, q):
                    return t
        finally:
            free(freed)
        raise RuntimeError("no ghost region contains the query point")

    cdef int _insert(self, int q) except -1:
        cdef double qx = self.xs[q]
        cdef double qy = self.ys[q]
        cdef int t = self._locate(qx, qy)
        if self.gsl[t] >= 0 and not self._ghost_region(t, qx, qy, q):
            t = self._hull_scan(qx, qy, q)

        # Grow the cavity of triangles whose (perturbed) circumdisk holds q.
        self.stamp += 1
        cdef int stamp = self.stamp
        cdef int sp = 0
        cdef int ncav = 0
        cdef int t1, t2, j, packed
        self.visited[t] = stamp
        self.incav[t] = 1
        self.stack[sp] = t
        sp += 1
        self.cav[ncav] = t
        ncav += 1
        self.nb = 0
        while sp > 0:
            sp -= 1
            t1 = self.stack[sp]
            for j in range(3):
                packed = self.tn[3 * t1 + j]
                t2 = packed // 3
                if self.visited[t2] == stamp:
                    if self.incav[t2]:
                        continue
                else:
                    self.visited[t2] = stamp
                    if self._in_cavity(t2, qx, qy, q):
                        self.incav[t2] = 1
                        self.stack[sp] = t2
                        sp += 1
                        self.cav[ncav] = t2
                        ncav += 1
                        continue
                    self.incav[t2] = 0
                self.bu[self.nb] = self.tv[3 * t1 + NX[j]]
                self.bv[self.nb] = self.tv[3 * t1 + PR[j]]
                self.bout[self.nb] = packed
                self.nb += 1

        cdef int i
        for i in range(ncav):
            self.freelist[self.nfree] = self.cav[i]
            self.nfree += 1

        # Re-triangulate: fan the boundary cycle from q.
        self.vstampc += 1
        cdef int e, nt, u
        for e in range(self.nb):
            nt = self._alloc_tri(self.bu[e], self.bv[e], q)
            self.newt[e] = nt
            u = self.bu[e]
            self.vstamp[u] = self.vstampc
            self.vedge[u] = e
        cdef int e2, nt2
        cdef int real_new = -1
        for e in range(self.nb):
            nt = self.newt[e]
            packed = self.bout[e]
            self.tn[3 * nt + 2] = packed
            self.tn[packed] = 3 * nt + 2
            if self.vstamp[self.bv[e]] != self.vstampc:
                raise RuntimeError("cavity boundary is not a closed cycle")
            e2 = self.vedge[self.bv[e]]
            nt2 = self.newt[e2]
            self.tn[3 * nt + 0] = 3 * nt2 + 1
            self.tn[3 * nt2 + 1] = 3 * nt + 0
            if real_new < 0 and self.gsl[nt] < 0:
                real_new = nt
        if real_new < 0:
            raise RuntimeError("insertion produced no real triangle")
        self.last = real_new
        return 0

    def run(self, cnp.ndarray[cnp.int32_t, ndim=1] order):
        cdef int n = self.n
        cdef cnp.int32_t* ord_ = <cnp.int32_t*> cnp.PyArray_DATA(order)
        cdef unsigned char* used = <unsigned char*> malloc(n)
        if used == NULL:
            raise MemoryError
        cdef int i, j, k, a, b, c, s
        for i in range(n):
            used[i] = 0
        try:
            a = ord_[0]
            b = ord_[1]
            c = -1
            for j in range(2, n):
                k = ord_[j]
                s = _orient(self.xs[a], self.ys[a], self.xs[b], self.ys[b],
                            self.xs[k], self.ys[k])
                if s != 0:
                    c = k
                    break
            if c < 0:
                raise DegenerateInputError("all points are collinear")
            if s < 0:
                self._init_triangle(a, c, b)
            else:
                self._init_triangle(a, b, c)
            used[a] = 1
            used[b] = 1
            used[c] = 1
            for j in range(n):
                k = ord_[j]
                if used[k]:
                    continue
                self._insert(k)
        finally:
            free(used)
        return self._extract()

    cdef int _init_triangle(self, int a, int b, int c) except -1:
        cdef int t = self._alloc_tri(a, b, c)
        cdef int gab = self._alloc_tri(b, a, self.ghost)
        cdef int gbc = self._alloc_tri(c, b, self.ghost)
        cdef int gca = self._alloc_tri(a, c, self.ghost)
        self.tn[3 * t + 0] = 3 * gbc + 2
        self.tn[3 * gbc + 2] = 3 * t + 0
        self.tn[3 * t + 1] = 3 * gca + 2
        self.tn[3 * gca + 2] = 3 * t + 1
        self.tn[3 * t + 2] = 3 * gab + 2
        self.tn[3 * gab + 2] = 3 * t + 2
        self.tn[3 * gab + 0] = 3 * gca + 1
        self.tn[3 * gca + 1] = 3 * gab + 0
        self.tn[3 * gab + 1] = 3 * gbc + 0
        self.tn[3 * gbc + 0] = 3 * gab + 1
        self.tn[3 * gbc + 1] = 3 * gca + 0
        self.tn[3 * gca + 0] = 3 * gbc + 1
        self.last = t
        return 0

    def _extract(self):
        cdef unsigned char* freed = <unsigned char*> malloc(self.cap)
        if freed == NULL:
            raise MemoryError
        cdef int i, t, j, u, v, w, nbr, r, tmp
        for i in range(self.cap):
            freed[i] = 0
        for i in range(self.nfree):
            freed[self.freelist[i]] = 1
        cdef int nreal = 0
        for t in range(self.ntri):
            if freed[t]:
                continue
            if self.gsl[t] < 0:
                nreal += 1
        hull = np.zeros(self.n, dtype=np.bool_)
        tris = np.empty((nreal, 3), dtype=np.int32)
        edges = np.empty((3 * nreal + self.n + 3, 2), dtype=np.int32)
        cdef cnp.npy_bool* hull_p = <cnp.npy_bool*> cnp.PyArray_DATA(hull)
        cdef cnp.int32_t* tri_p = <cnp.int32_t*> cnp.PyArray_DATA(tris)
        cdef cnp.int32_t* edge_p = <cnp.int32_t*> cnp.PyArray_DATA(edges)
        cdef long nedge = 0
        cdef int it = 0
        cdef int vv[3]
        try:
            for t in range(self.ntri):
                if freed[t]:
                    continue
                if self.gsl[t] >= 0:
                    j = self.gsl[t]
                    hull_p[self.tv[3 * t + NX[j]]] = 1
                    hull_p[self.tv[3 * t + PR[j]]] = 1
                    continue
                # rotate so the smallest vertex leads (orientation preserved)
                vv[0] = self.tv[3 * t]
                vv[1] = self.tv[3 * t + 1]
                vv[2] = self.tv[3 * t + 2]
                r = 0
                if vv[1] < vv[r]:
                    r = 1
                if vv[2] < vv[r]:
                    r = 2
                tri_p[3 * it] = vv[r]
                tri_p[3 * it + 1] = vv[NX[r]]
                tri_p[3 * it + 2] = vv[PR[r]]
                it += 1
                for j in range(3):
                    nbr = self.tn[3 * t + j] // 3
                    if self.gsl[nbr] >= 0 or nbr > t:
                        u = self.tv[3 * t + NX[j]]
                        v = self.tv[3 * t + PR[j]]
                        if u < v:
                            edge_p[2 * nedge] = u
                            edge_p[2 * nedge + 1] = v
                        else:
                            edge_p[2 * nedge] = v
                            edge_p[2 * nedge + 1] = u
                        nedge += 1
        finally:
            free(freed)
        edges = edges[:nedge].copy()
        indptr, indices = _adjacency_csr(self.n, edges)
        return tris, hull, edges, indptr, indices


def _adjacency_csr(int n, cnp.ndarray[cnp.int32_t, ndim=2] edges):
    """Sorted-per-vertex CSR adjacency from (u, v) edge rows."""
    cdef long ne = edges.shape[0]
    indptr = np.zeros(n + 1, dtype=np.int64)
    indices = np.empty(2 * ne, dtype=np.int32)
    cdef cnp.int64_t* ip = <cnp.int64_t*> cnp.PyArray_DATA(indptr)
    cdef cnp.int32_t* ix = <cnp.int32_t*> cnp.PyArray_DATA(indices)
    cdef cnp.int32_t* ep = <cnp.int32_t*> cnp.PyArray_DATA(edges)
    cdef long e, pos
    cdef int u, v, i, key
    cdef long* fill = <long*> malloc((n + 1) * sizeof(long))
    if fill == NULL:
        raise MemoryError
    try:
        for e in range(ne):
            ip[edges[e, 0] + 1] += 1
            ip[edges[e, 1] + 1] += 1
        for u in range(n):
            ip[u + 1] += ip[u]
        for u in range(n + 1):
            fill[u] = ip[u]
        for e in range(ne):
            u = ep[2 * e]
            v = ep[2 * e + 1]
            ix[fill[u]] = v
            fill[u] += 1
            ix[fill[v]] = u
            fill[v] += 1
        # per-vertex insertion sort; neighbor lists are tiny
        for u in range(n):
            for pos in range(ip[u] + 1, ip[u + 1]):
                key = ix[pos]
                e = pos - 1
                while e >= ip[u] and ix[e] > key:
                    ix[e + 1] = ix[e]
                    e -= 1
                ix[e + 1] = key
    finally:
        free(fill)
    return indptr, indices


def triangulate(xs, ys, order):
    """Delaunay-triangulate the points (xs[i], ys[i]).

    ``order`` is the insertion order (a permutation of range(n)); the output
    is independent of it, but spatially coherent orders are much faster.
    Returns (triangles, hull_mask, edges, adj_indptr, adj_indices): CCW
    triangles rotated smallest-vertex-first, (min, max) edge pairs, and the
    sorted CSR adjacency.  Duplicate points must have been rejected by the
    caller.
    """
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    order = np.ascontiguousarray(order, dtype=np.int32)
    if xs.shape[0] < 3:
        raise DegenerateInputError("need at least 3 points")
    builder = _Builder(xs, ys)
    return builder.run(order)
