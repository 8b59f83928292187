"""Exact sign evaluation for the planar orientation and in-circle tests.

Every finite double is m * 2**e with integer m, so after rescaling by a
common power of two all coordinates become Python integers and determinant
signs can be computed with no rounding at all.  These routines are the slow
fallback behind the floating-point filters; they also implement the symbolic
tie-break used to make triangulations of degenerate (cocircular) inputs
unique.
"""

from math import frexp

_2_53 = 9007199254740992.0  # 2**53


def _scaled_ints(vals):
    ms = []
    es = []
    for v in vals:
        m, e = frexp(v)
        ms.append(int(m * _2_53))  # exact: |m*2**53| is an integer <= 2**53
        es.append(e - 53)
    emin = min(es)
    return [m << (e - emin) for m, e in zip(ms, es)]


def orient2d_exact(ax, ay, bx, by, cx, cy):
    """Sign of the signed area of triangle (a, b, c): +1 CCW, -1 CW, 0 collinear."""
    iax, iay, ibx, iby, icx, icy = _scaled_ints((ax, ay, bx, by, cx, cy))
    det = (iax - icx) * (iby - icy) - (iay - icy) * (ibx - icx)
    return (det > 0) - (det < 0)


def incircle_exact(ax, ay, bx, by, cx, cy, px, py):
    """Sign of the in-circle determinant: +1 iff p is strictly inside the
    circle through (a, b, c) when they are counter-clockwise."""
    iax, iay, ibx, iby, icx, icy, ipx, ipy = _scaled_ints(
        (ax, ay, bx, by, cx, cy, px, py)
    )
    adx = iax - ipx
    ady = iay - ipy
    bdx = ibx - ipx
    bdy = iby - ipy
    cdx = icx - ipx
    cdy = icy - ipy
    alift = adx * adx + ady * ady
    blift = bdx * bdx + bdy * bdy
    clift = cdx * cdx + cdy * cdy
    det = (
        alift * (bdx * cdy - cdx * bdy)
        + blift * (cdx * ady - adx * cdy)
        + clift * (adx * bdy - bdx * ady)
    )
    return (det > 0) - (det < 0)


def incircle_perturbed_exact(ax, ay, ia, bx, by, ib, cx, cy, ic, px, py, ip):
    """In-circle sign with exact cocircular ties broken symbolically.

    Each point i is treated as lifted onto the paraboloid with its height
    lowered by eps**(i+1); smaller indices get the (infinitesimally) larger
    offset.  The first-order term of the perturbed determinant decides every
    tie as long as (a, b, c) are not collinear, which makes the resulting
    triangulation of any input unique and deterministic.
    """
    s = incircle_exact(ax, ay, bx, by, cx, cy, px, py)
    if s:
        return s
    for idx, row in sorted(((ia, 0), (ib, 1), (ic, 2), (ip, 3))):
        if row == 0:
            t = -orient2d_exact(bx, by, cx, cy, px, py)
        elif row == 1:
            t = orient2d_exact(ax, ay, cx, cy, px, py)
        elif row == 2:
            t = -orient2d_exact(ax, ay, bx, by, px, py)
        else:
            t = orient2d_exact(ax, ay, bx, by, cx, cy)
        if t:
            return t
    raise ValueError("all four points collinear; no valid incircle tie-break")
