"""Analytic typical-degree models and the two-point concentration predictor.

The d=2 tail comes from Hilhorst's asymptotic pmf
q(k) = (C / 4 pi^2) (8 pi^2)^k / (2k)! with C ~= 0.34.  Everything is kept
in log space: the tail reaches 1e-2000 and beyond well before the predictor
runs out of interesting window sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from pdx.degree_stats import Histogram
from pdx.errors import ModelBuildError

HILHORST_C = 0.34
_LOG_8PI2 = math.log(8.0 * math.pi ** 2)
_LOG_4PI2 = math.log(4.0 * math.pi ** 2)


def l_d(dim: int) -> int:
    """Width parameter of the general-dimension concentration interval."""
    if dim < 2:
        raise ValueError("dim must be >= 2")
    return (dim + 3) // 2


def asymptotic_max_degree(rho: float, dim: int = 2) -> float:
    """Leading-order mean maximal degree, (d-1)/2 * log(rho)/log(log(rho))."""
    if rho <= math.e ** math.e:
        raise ValueError("rho must exceed e**e")
    return (dim - 1) / 2.0 * math.log(rho) / math.log(math.log(rho))


def hilhorst_log_pmf(k: int, c: float = HILHORST_C) -> float:
    if k < 3:
        raise ValueError("the planar typical degree needs k >= 3")
    return math.log(c) - _LOG_4PI2 + k * _LOG_8PI2 - math.lgamma(2 * k + 1)


def hilhorst_pmf(k: int, c: float = HILHORST_C) -> float:
    """Asymptotic probability that the planar typical degree equals k."""
    return math.exp(hilhorst_log_pmf(k, c))


def _logsumexp(values) -> float:
    m = max(values)
    if m == -math.inf:
        return -math.inf
    return m + math.log(sum(math.exp(v - m) for v in values))


@dataclass(frozen=True)
class TypicalDegreeModel:
    """Tail model of the typical degree: q(k) and G(k) = P(D > k) in logs."""

    dim: int
    k_min: int
    k_max: int
    source: str
    log_q: dict[int, float]
    log_g: dict[int, float]

    def q(self, k: int) -> float:
        if k not in self.log_q:
            raise ValueError(f"k={k} outside model range "
                             f"[{self.k_min}, {self.k_max}]")
        return math.exp(self.log_q[k])

    def G(self, k: int) -> float:
        if k not in self.log_g:
            raise ValueError(f"k={k} outside model tail range")
        return math.exp(self.log_g[k])

    def log_G(self, k: int) -> float:
        if k not in self.log_g:
            raise ValueError(f"k={k} outside model tail range")
        return self.log_g[k]


def build_model(source, dim: int = 2, k_min: int | None = None,
                k_max: int = 400, c: float | None = None) -> TypicalDegreeModel:
    """Assemble a tail model.

    source: "hilhorst" (dim=2), "parametric" (uses the envelope
    q(k) = c^k k^(-2k/(d-1)) with a caller-supplied constant; heuristic for
    d != 2), or a Histogram of observed degrees.
    """
    if dim < 2:
        raise ValueError("dim must be >= 2")
    if isinstance(source, Histogram):
        return _build_empirical(source, dim, 10 if k_min is None else k_min)
    if source == "hilhorst":
        if dim != 2:
            raise ValueError("the hilhorst tail is specific to dim=2")
        kmin = 10 if k_min is None else k_min
        cc = HILHORST_C if c is None else c
        log_q = {k: hilhorst_log_pmf(k, cc) for k in range(3, k_max + 2)}
    elif source == "parametric":
        if c is None or c <= 0:
            raise ValueError("parametric source needs a positive constant c")
        kmin = (dim + 2) if k_min is None else k_min
        log_q = {
            k: k * math.log(c) - (2.0 * k / (dim - 1)) * math.log(k)
            for k in range(max(3, dim + 1), k_max + 2)
        }
    else:
        raise ModelBuildError(f"unknown model source {source!r}")
    log_g = _tail_logs(log_q, kmin, k_max)
    _check_tail(log_q, kmin, k_max)
    return TypicalDegreeModel(dim=dim, k_min=kmin, k_max=k_max,
                              source=str(source), log_q=log_q, log_g=log_g)


def _tail_logs(log_q: dict[int, float], k_min: int, k_max: int):
    # G(k) = sum_{j>k} q(j); terms decay superexponentially, so a short
    # suffix reaches far below 1e-3 relative truncation error
    log_g = {}
    acc = -math.inf
    hi = max(log_q)
    for k in range(hi - 1, k_min - 2, -1):
        acc = _logsumexp([acc, log_q[k + 1]])
        if k <= k_max:
            log_g[k] = acc
    return log_g


def _check_tail(log_q, k_min, k_max):
    prev = None
    for k in range(k_min, k_max + 1):
        cur = log_q[k]
        if prev is not None and cur >= prev:
            raise ModelBuildError(f"pmf is not strictly decreasing at k={k}")
        prev = cur


def _build_empirical(hist: Histogram, dim: int, k_min: int) -> TypicalDegreeModel:
    if hist.total <= 0:
        raise ModelBuildError("empty histogram")
    logs = {}
    for k in sorted(hist.counts):
        c = hist.counts[k]
        if c > 0:
            logs[k] = math.log(c) - math.log(hist.total)
    ks = sorted(logs)
    if not ks or ks[-1] <= k_min:
        raise ModelBuildError(f"no histogram mass beyond k_min={k_min}")
    for k in range(k_min, ks[-1] + 1):
        if k not in logs:
            raise ModelBuildError(f"histogram tail has a gap at k={k}")
        if k > k_min and logs[k] >= logs[k - 1]:
            raise ModelBuildError(
                f"histogram tail is not strictly decreasing at k={k} "
                f"(counts {hist.counts.get(k - 1)} -> {hist.counts.get(k)})"
            )
    k_max = ks[-1] - 1  # G(k) > 0 needs mass beyond k
    log_g = _tail_logs(logs, k_min, k_max)
    return TypicalDegreeModel(dim=dim, k_min=k_min, k_max=k_max,
                              source="empirical", log_q=logs, log_g=log_g)


@dataclass(frozen=True)
class InterpolatedTail:
    """Continuous extension of the tail: h = -log G interpolated linearly,
    G_c = exp(-h_c); strictly increasing h_c makes G_c strictly decreasing."""

    model: TypicalDegreeModel
    ks: np.ndarray = field(repr=False)
    h: np.ndarray = field(repr=False)

    @property
    def k_min(self) -> int:
        return int(self.ks[0])

    @property
    def k_max(self) -> int:
        return int(self.ks[-1])

    def h_c(self, x: float) -> float:
        if not self.k_min <= x <= self.k_max:
            raise ValueError(f"x={x} outside [{self.k_min}, {self.k_max}]")
        i = min(int(math.floor(x)), self.k_max - 1) - self.k_min
        frac = x - (self.k_min + i)
        return float(self.h[i] + frac * (self.h[i + 1] - self.h[i]))

    def gc(self, x: float) -> float:
        return math.exp(-self.h_c(x))

    def log_gc(self, x: float) -> float:
        return -self.h_c(x)

    def gc_inverse(self, p: float) -> float:
        """x with G_c(x) = p, by bisection (then an in-segment linear solve,
        tightening the result well below the 1e-9 tolerance)."""
        if not 0.0 < p <= math.exp(-self.h[0]):
            raise ValueError(f"p={p} outside (0, G(k_min)]")
        target = -math.log(p)
        return self._h_inverse(target)

    def _h_inverse(self, target: float) -> float:
        h = self.h
        if target > h[-1]:
            raise ValueError("p below the model tail range; increase k_max")
        lo, hi = 0, len(h) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if h[mid] <= target:
                lo = mid
            else:
                hi = mid
        span = h[lo + 1] - h[lo]
        frac = (target - h[lo]) / span if span > 0 else 0.0
        return float(self.k_min + lo + frac)


def interpolate(model: TypicalDegreeModel) -> InterpolatedTail:
    ks = np.arange(model.k_min, model.k_max + 1)
    h = np.array([-model.log_G(int(k)) for k in ks])
    if not (np.diff(h) > 0).all():
        raise ModelBuildError("tail -log G is not strictly increasing")
    return InterpolatedTail(model=model, ks=ks, h=h)


def a_rho(tail: InterpolatedTail, rho: float) -> float:
    """Continuous predictor level: A with G_c(A) = 1/rho."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    if math.log(rho) < tail.h[0]:
        raise ValueError(f"rho={rho} below model range (needs rho >= "
                         f"{math.exp(tail.h[0]):.3g})")
    return tail._h_inverse(math.log(rho))


def predictor_i(tail: InterpolatedTail, rho: float) -> int:
    """The two-point concentration level I = floor(A + 1/2)."""
    return int(math.floor(a_rho(tail, rho) + 0.5))


def predictor_j(tail: InterpolatedTail, rho: float, dim: int | None = None) -> int:
    """Lower end of the general-dimension concentration interval."""
    d = tail.model.dim if dim is None else dim
    return predictor_i(tail, rho) + 1 - l_d(d)


def one_value_windows(tail: InterpolatedTail, i: int) -> float:
    """Smallest window measure rho with I_rho = i.

    The exact endpoint is exp(h_c(i - 1/2)); the returned float is nudged up
    three ulps so that I at the returned value is exactly i in floating
    point, while I at (value - 1) is i - 1.
    """
    if i < tail.k_min + 1:
        raise ValueError(f"i must be >= k_min + 1 = {tail.k_min + 1}")
    rho = math.exp(tail.h_c(i - 0.5))
    for _ in range(3):
        rho = math.nextafter(rho, math.inf)
    return rho


def tail_scaling_diagnostics(tail: InterpolatedTail, rho: float) -> dict:
    """Products rho * G(...) around the predictor level.

    rho*G(I+1) <= 1 and rho*G(I-1) >= 1 hold identically by construction of
    I; the integer-argument products oscillate within each constant-I
    window, so the smooth variant rho*G_c(A-1) is reported as well (that one
    grows monotonically in rho).
    """
    a = a_rho(tail, rho)
    i = int(math.floor(a + 0.5))
    logrho = math.log(rho)

    def prod(k: float) -> float:
        return math.exp(logrho - tail.h_c(k))

    lower = {l: prod(i - 1 - l) for l in range(4) if i - 1 - l >= tail.k_min}
    return {
        "rho": rho,
        "A": a,
        "I": i,
        "rho_G_upper": prod(i + 1),
        "rho_G_lower": lower,
        "rho_Gc_smooth": prod(a - 1.0) if a - 1.0 >= tail.k_min else math.inf,
    }


@dataclass(frozen=True)
class IntegralEstimate:
    value: float
    stderr: float
    hits: int
    n: int
    boundary_warning: bool


# If the flower area is <= 1 every petal has radius <= 1/sqrt(pi), so every
# neighbor lies within 2/sqrt(pi) of the nucleus; this necessary condition
# prunes candidates before any triangulation is built.
_SUPPORT_RADIUS = 2.0 / math.sqrt(math.pi)


def integral_pmf_mc(k: int, R: float = 2.0, n: int = 1_000_000,
                    seed: int = 0) -> IntegralEstimate:
    """Monte-Carlo evaluation of the 2k-dimensional integral representation
    of P(D = k): the volume of configurations y_1..y_k around the origin
    that are in convex position with flower area at most 1.

    Samples y uniformly in [-R, R]^(2k); a sample is a hit when the origin
    is an interior vertex of Del({0, y_1..y_k}) adjacent to all k points and
    the flower area is <= 1.  The estimate is hit-rate times (2R)^(2k).
    """
    from pdx import delaunay
    from pdx.flowers import voronoi_flower

    if k not in (3, 4, 5):
        raise ValueError("supported for k in {3, 4, 5} (cost grows as (2R)^2k)")
    if n <= 0:
        raise ValueError("n must be >= 1")
    if R <= 0:
        raise ValueError("R must be positive")
    rng = np.random.default_rng(np.random.SeedSequence([seed, k]))
    volume = (2.0 * R) ** (2 * k)
    hits = 0
    shell_hits = 0
    shell = 0.98 * R
    remaining = n
    chunk_size = 1 << 16
    while remaining > 0:
        m = min(remaining, chunk_size)
        y = rng.uniform(-R, R, size=(m, k, 2))
        remaining -= m
        keep = (y ** 2).sum(axis=2).max(axis=1) <= _SUPPORT_RADIUS ** 2
        for cfg in y[keep]:
            pts = np.concatenate([np.zeros((1, 2)), cfg])
            try:
                t = delaunay.build(pts)
            except ValueError:
                continue
            if t.hull[0] or len(t.neighbors(0)) != k:
                continue
            f = voronoi_flower(t, 0)
            if f.area <= 1.0:
                hits += 1
                if np.abs(cfg).max() >= shell:
                    shell_hits += 1
    p = hits / n
    stderr = volume * math.sqrt(p * (1.0 - p) / n)
    warn = hits > 0 and shell_hits / hits > 0.001
    return IntegralEstimate(value=p * volume, stderr=stderr, hits=hits, n=n,
                            boundary_warning=warn)
