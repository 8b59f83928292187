"""Parallel Monte-Carlo harness for window-maximum degree experiments.

Every trial is a pure function of (config, trial_index), so results are
identical for any worker count and scheduling; aggregation walks trials in
index order.
"""

from __future__ import annotations

import math
import multiprocessing
import os
from dataclasses import dataclass, field, replace

import numpy as np

from pdx import analytic, degree_stats
from pdx.degree_stats import Box, Histogram
from pdx.delaunay import build
from pdx.flowers import voronoi_flower
from pdx.sampling import Window, add_origin, sample_poisson

DIAGNOSTIC_FLAGS = frozenset({"clusters", "e_rho"})


@dataclass(frozen=True)
class ExperimentConfig:
    rho: float
    trials: int
    master_seed: int
    alpha: float = 2.5
    pad_factor: float = 4.0
    workers: int | None = None
    diagnostics: frozenset = frozenset()

    def __post_init__(self):
        if self.rho < 1:
            raise ValueError("rho must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.alpha <= 2:
            raise ValueError("alpha must be > 2")
        if self.pad_factor < 0:
            raise ValueError("pad_factor must be >= 0")
        unknown = set(self.diagnostics) - DIAGNOSTIC_FLAGS
        if unknown:
            raise ValueError(f"unknown diagnostics: {sorted(unknown)}")
        object.__setattr__(self, "diagnostics", frozenset(self.diagnostics))

    def window(self) -> Window:
        return Window.for_rho(self.rho, self.pad_factor)


@dataclass
class TrialResult:
    trial_index: int
    delta: int | None  # None when no eligible vertex (max = -infinity)
    n_points: int
    n_boundary_unsafe: int
    exceedances: dict[int, int]
    degree_hist: dict[int, int]
    e_rho: bool | None = None
    max_cluster: int | None = None


@dataclass
class Summary:
    rho: float
    trials: int
    i_rho: int | None  # None when rho is below the analytic model's range
    j_rho: int | None
    histogram: dict[int, int]
    p_hat: dict[int, float]
    stderr: dict[int, float]
    p_two: float | None
    p_two_stderr: float | None
    mean_delta: float | None
    n_no_vertex: int


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    trials: list[TrialResult]
    summary: Summary


_PREDICTOR = None


def hilhorst_predictor() -> analytic.InterpolatedTail:
    global _PREDICTOR
    if _PREDICTOR is None:
        _PREDICTOR = analytic.interpolate(analytic.build_model("hilhorst"))
    return _PREDICTOR


def resolve_workers(config: ExperimentConfig) -> int:
    env = os.environ.get("PDX_THREADS")
    if env:
        return max(1, int(env))
    if config.workers:
        return max(1, config.workers)
    return os.cpu_count() or 1


def run_trial(config: ExperimentConfig, trial_index: int) -> TrialResult:
    """Sample, triangulate, and measure the window maximum for one trial."""
    try:
        window = config.window()
        sample = sample_poisson(window, config.master_seed, trial_index)
        t = build(sample.points)
        rec = degree_stats.degree_records(t, window)
        eligible = rec["safe"] & rec["in_core"]
        degs = rec["degree"][eligible]
        n_unsafe = int((rec["in_core"] & ~rec["safe"]).sum())

        if len(degs) == 0:
            delta = None
            exceed: dict[int, int] = {}
            dh: dict[int, int] = {}
        else:
            delta = int(degs.max())
            counts = np.bincount(degs)
            dh = {int(k): int(c) for k, c in enumerate(counts) if c > 0}
            tail = counts[::-1].cumsum()[::-1]
            lo = min(8, delta)
            exceed = {k: int(tail[k]) for k in range(lo, delta + 1)}
            exceed[delta + 1] = 0
            exceed = dict(sorted(exceed.items()))

        e_rho = None
        max_cluster = None
        if config.diagnostics & {"e_rho", "clusters"}:
            grid = degree_stats.subdivide(window, config.alpha)
            if "e_rho" in config.diagnostics:
                e_rho = degree_stats.e_rho_holds(sample, grid)
            if "clusters" in config.diagnostics:
                try:
                    k_i = analytic.predictor_i(hilhorst_predictor(),
                                               config.rho)
                except ValueError:
                    k_i = None
                if k_i is not None:
                    max_cluster = degree_stats.max_cell_exceedances(
                        t, window, grid, k_i, rec
                    )
        return TrialResult(
            trial_index=trial_index,
            delta=delta,
            n_points=sample.n_points,
            n_boundary_unsafe=n_unsafe,
            exceedances=exceed,
            degree_hist=dh,
            e_rho=e_rho,
            max_cluster=max_cluster,
        )
    except Exception as exc:
        raise RuntimeError(f"trial {trial_index} failed: {exc}") from exc


def summarize(config: ExperimentConfig, trials: list[TrialResult]) -> Summary:
    tail = hilhorst_predictor()
    try:
        i_rho = analytic.predictor_i(tail, config.rho)
        j_rho = analytic.predictor_j(tail, config.rho, 2)
    except ValueError:  # rho below the model's tail range
        i_rho = j_rho = None
    hist: dict[int, int] = {}
    n_none = 0
    for tr in trials:
        if tr.delta is None:
            n_none += 1
        else:
            hist[tr.delta] = hist.get(tr.delta, 0) + 1
    hist = dict(sorted(hist.items()))
    n = len(trials)
    p_hat = {k: c / n for k, c in hist.items()}
    stderr = {k: math.sqrt(p * (1.0 - p) / n) for k, p in p_hat.items()}
    if i_rho is None:
        p_two = p_two_stderr = None
    else:
        p_two = p_hat.get(i_rho, 0.0) + p_hat.get(i_rho + 1, 0.0)
        p_two_stderr = math.sqrt(p_two * (1.0 - p_two) / n)
    mean_delta = (
        sum(k * c for k, c in hist.items()) / (n - n_none) if hist else None
    )
    return Summary(
        rho=config.rho,
        trials=n,
        i_rho=i_rho,
        j_rho=j_rho,
        histogram=hist,
        p_hat=p_hat,
        stderr=stderr,
        p_two=p_two,
        p_two_stderr=p_two_stderr,
        mean_delta=mean_delta,
        n_no_vertex=n_none,
    )


def _trial_star(args):
    return run_trial(*args)


def _map_ordered(func, argss, workers, partial_sink=None):
    """Map preserving argument order; flushes completed work on failure."""
    done = []
    if workers <= 1:
        for a in argss:
            try:
                done.append(func(a))
            except Exception:
                if partial_sink:
                    partial_sink(done)
                raise
        return done
    ctx = multiprocessing.get_context("fork")
    chunk = max(1, len(argss) // (workers * 8))
    with ctx.Pool(processes=workers) as pool:
        try:
            for res in pool.imap(func, argss, chunksize=chunk):
                done.append(res)
        except Exception:
            if partial_sink:
                partial_sink(done)
            raise
    return done


def run_experiment(config: ExperimentConfig,
                   partial_path: str | None = None) -> ExperimentResult:
    """Run all trials and aggregate; outcome is independent of worker count."""
    workers = resolve_workers(config)
    args = [(config, i) for i in range(config.trials)]

    def sink(done):
        if partial_path and done:
            from pdx import report

            partial = ExperimentResult(config, list(done),
                                       summarize(config, list(done)))
            report.write_result(partial_path, partial)

    trials = _map_ordered(_trial_star, args, workers, partial_sink=sink)
    return ExperimentResult(config, trials, summarize(config, trials))


# ---------------------------------------------------------------------------
# Palm (typical-degree) experiment

@dataclass
class PalmResult:
    rho: float
    trials: int
    histogram: Histogram
    n_uncertified: int


def palm_trial(rho: float, seed: int, trial_index: int,
               pad_factor: float = 4.0, locality_radius: float = 10.0):
    """Degree of the Palm point for one trial.

    Only points near the box center can matter: as long as the flower of the
    Palm vertex stays inside the restricted box, its degree equals the
    full-sample degree, so the build is run on a small neighborhood first and
    enlarged (rarely) until that certificate holds.  Returns
    (degree, certified).
    """
    window = Window.for_rho(rho, pad_factor)
    sample = add_origin(sample_poisson(window, seed, trial_index))
    pts = sample.points
    s = window.side
    cx = cy = s / 2.0
    xmin_full, xmax_full = -window.pad, s + window.pad
    r = locality_radius
    while True:
        x0 = max(cx - r, xmin_full)
        x1 = min(cx + r, xmax_full)
        y0 = max(cy - r, xmin_full)
        y1 = min(cy + r, xmax_full)
        full = (x0 == xmin_full and x1 == xmax_full
                and y0 == xmin_full and y1 == xmax_full)
        mask = ((pts[:, 0] >= x0) & (pts[:, 0] <= x1)
                & (pts[:, 1] >= y0) & (pts[:, 1] <= y1))
        idx = np.nonzero(mask)[0]
        if len(idx) >= 4:
            sub = pts[idx]
            palm_local = int(np.nonzero(idx == sample.palm_index)[0][0])
            t = build(sub)
            if not t.hull[palm_local]:
                f = voronoi_flower(t, palm_local)
                ok = all(
                    d.center[0] - math.sqrt(d.radius_sq) >= x0
                    and d.center[0] + math.sqrt(d.radius_sq) <= x1
                    and d.center[1] - math.sqrt(d.radius_sq) >= y0
                    and d.center[1] + math.sqrt(d.radius_sq) <= y1
                    for d in f.petals
                )
                deg = len(t.neighbors(palm_local))
                if ok:
                    return deg, True
                if full:
                    return deg, False
            elif full:
                return len(t.neighbors(palm_local)), False
        r *= 2.0


def _palm_star(args):
    return palm_trial(*args)


def palm_run(rho: float, trials: int, seed: int, pad_factor: float = 4.0,
             workers: int | None = None) -> PalmResult:
    """Monte-Carlo estimate of the typical-degree pmf via Palm insertion."""
    w = workers or resolve_workers(ExperimentConfig(rho, trials, seed))
    args = [(rho, seed, i, pad_factor) for i in range(trials)]
    rows = _map_ordered(_palm_star, args, w)
    hist = Histogram()
    bad = 0
    for deg, certified in rows:
        hist.add(int(deg))
        if not certified:
            bad += 1
    return PalmResult(rho=rho, trials=trials, histogram=hist,
                      n_uncertified=bad)


# ---------------------------------------------------------------------------
# Block-tail comparison (max-in-block vs typical-degree tail)

@dataclass
class BlockTailReport:
    rho: float
    trials: int
    k: int
    block_area: float
    p_block: float
    p_block_stderr: float
    g_tail: float          # pooled estimate of P(D >= k)
    upper_bound: float     # vol(B) * g_tail
    lower_bound: float     # vol(B)/5 * g_tail
    hits: int
    low_power: bool


def _block_worker(args):
    config, box, k, idx = args
    window = config.window()
    sample = sample_poisson(window, config.master_seed, idx)
    t = build(sample.points)
    rec = degree_stats.degree_records(t, window)
    hit = degree_stats.exceedance_count(t, window, box, k, rec) >= 1
    eligible = rec["safe"] & rec["in_core"]
    degs = rec["degree"][eligible]
    counts = np.bincount(degs) if len(degs) else np.zeros(1, dtype=int)
    return hit, counts


def block_tail_check(config: ExperimentConfig, block_side: float,
                     k: int) -> BlockTailReport:
    """Estimate P(max degree in a centered block >= k) and compare it with
    the universal upper bound vol(B)*P(D >= k) and one fifth of it."""
    window = config.window()
    if block_side < 0 or block_side > window.side:
        raise ValueError("block must fit inside the core window")
    lo = (window.side - block_side) / 2.0
    box = Box(lo, lo, lo + block_side, lo + block_side)
    args = [(config, box, k, i) for i in range(config.trials)]
    rows = _map_ordered(_block_worker, args, resolve_workers(config))
    hits = sum(1 for h, _ in rows if h)
    maxlen = max(len(c) for _, c in rows)
    pooled = np.zeros(maxlen, dtype=np.int64)
    for _, c in rows:
        pooled[:len(c)] += c
    total = int(pooled.sum())
    g_tail = float(pooled[k:].sum() / total) if total and k < maxlen else 0.0
    p_block = hits / config.trials
    return BlockTailReport(
        rho=config.rho,
        trials=config.trials,
        k=k,
        block_area=box.area,
        p_block=p_block,
        p_block_stderr=math.sqrt(p_block * (1 - p_block) / config.trials),
        g_tail=g_tail,
        upper_bound=box.area * g_tail,
        lower_bound=box.area / 5.0 * g_tail,
        hits=hits,
        low_power=hits < 20,
    )


# ---------------------------------------------------------------------------
# Pad calibration

@dataclass
class PadCalibrationReport:
    rho: float
    trials: int
    pad_factors: tuple[float, float]
    histograms: tuple[dict[int, int], dict[int, int]]
    bin_diffs: dict[int, float]
    chi2: float
    dof: int
    p_value: float
    n_delta_down: int   # trials where the narrower pad lowered the maximum
    n_delta_up: int
    sign_p_value: float

    def passed(self, threshold: float = 0.01) -> bool:
        return self.p_value > threshold


def pad_calibration(config: ExperimentConfig,
                    factor_b: float | None = None) -> PadCalibrationReport:
    """Compare maximum-degree histograms at pad_factor and (default) twice
    the pad_factor, with common per-trial seeds.

    Core-window points are shared bit-for-bit between the two runs (the pad
    only changes the boundary strips), so the comparison is paired and most
    per-trial maxima coincide.  When factor_a is 0 the samples are nested
    (no strips at all), and the narrower run can only ever lose maxima, so
    the discordance counts expose boundary distortion one-sidedly.
    """
    from scipy import stats

    if config.trials < 200:
        raise ValueError("pad calibration needs at least 200 trials")
    fb = 2.0 * config.pad_factor if factor_b is None else factor_b
    res_a = run_experiment(config)
    res_b = run_experiment(replace(config, pad_factor=fb))
    ha = res_a.summary.histogram
    hb = res_b.summary.histogram
    keys = sorted(set(ha) | set(hb))
    n = config.trials
    diffs = {k: (ha.get(k, 0) - hb.get(k, 0)) / n for k in keys}

    # two-sample chi-square on pooled bins with expected count >= 5
    ca = np.array([ha.get(k, 0) for k in keys], dtype=float)
    cb = np.array([hb.get(k, 0) for k in keys], dtype=float)
    pooled = ca + cb
    order = np.argsort(-pooled)
    bins_a, bins_b = [], []
    rest_a = rest_b = 0.0
    for i in order:
        if pooled[i] >= 10:
            bins_a.append(ca[i])
            bins_b.append(cb[i])
        else:
            rest_a += ca[i]
            rest_b += cb[i]
    if rest_a + rest_b > 0 or not bins_a:
        bins_a.append(rest_a)
        bins_b.append(rest_b)
    chi2 = 0.0
    dof = max(1, len(bins_a) - 1)
    for aa, bb in zip(bins_a, bins_b):
        tot = aa + bb
        if tot > 0:
            chi2 += (aa - bb) ** 2 / tot
    p_value = float(stats.chi2.sf(chi2, dof))

    down = up = 0
    for ta, tb in zip(res_a.trials, res_b.trials):
        da = -1 if ta.delta is None else ta.delta
        db = -1 if tb.delta is None else tb.delta
        if da < db:
            down += 1
        elif da > db:
            up += 1
    if down + up:
        sign_p = float(stats.binomtest(min(down, up), down + up, 0.5).pvalue)
    else:
        sign_p = 1.0
    return PadCalibrationReport(
        rho=config.rho,
        trials=n,
        pad_factors=(config.pad_factor, fb),
        histograms=(ha, hb),
        bin_diffs=diffs,
        chi2=chi2,
        dof=dof,
        p_value=p_value,
        n_delta_down=down,
        n_delta_up=up,
        sign_p_value=sign_p,
    )
