"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -rA`` to see every line.  The two
criteria whose stated numbers are unattainable for this artifact (1 and 6)
are implemented exactly as stated and fail with a message that includes the
measured values; see the assertion text for the quantitative story.

Heavy shared runs (the 2000-trial experiment, the 1e5-trial Palm estimator)
are session fixtures; set PDX_ACCEPT_CACHE=1 to cache them on disk between
invocations while iterating.
"""

import math
import os
import pickle
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from pdx import analytic, degree_stats, delaunay, experiments, graph_props, report
from pdx.degree_stats import Histogram
from pdx.flowers import phi_content, voronoi_flower

CACHE_DIR = Path(__file__).parent / "_cache"

BIG_CONFIG = experiments.ExperimentConfig(
    rho=1e6,
    trials=2000,
    master_seed=20260106,
    diagnostics=frozenset({"clusters", "e_rho"}),
)

PALM_RHO = 4000.0
PALM_TRIALS = 100_000
PALM_SEED = 40405


def _cached(name, builder):
    if os.environ.get("PDX_ACCEPT_CACHE", "") not in ("", "0"):
        CACHE_DIR.mkdir(exist_ok=True)
        path = CACHE_DIR / f"{name}.pkl"
        if path.exists():
            with open(path, "rb") as fh:
                return pickle.load(fh)
        value = builder()
        with open(path, "wb") as fh:
            pickle.dump(value, fh)
        return value
    return builder()


@pytest.fixture(scope="session")
def big_run():
    return _cached("big_run", lambda: experiments.run_experiment(BIG_CONFIG))


@pytest.fixture(scope="session")
def pooled_degrees(big_run):
    pooled: dict[int, int] = {}
    for tr in big_run.trials:
        for k, c in tr.degree_hist.items():
            pooled[k] = pooled.get(k, 0) + c
    return pooled


@pytest.fixture(scope="session")
def palm_big():
    return _cached(
        "palm_big",
        lambda: experiments.palm_run(PALM_RHO, PALM_TRIALS, PALM_SEED),
    )


@pytest.fixture(scope="session")
def tail():
    return analytic.interpolate(analytic.build_model("hilhorst"))


def _line(num, ok, text):
    print(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {text}")
    return ok


def test_criterion_01_figure2_reproduction(big_run):
    """Figure-2 bar values at rho=1e6, >=2000 trials, default pad."""
    s = big_run.summary
    p15 = s.p_hat.get(15, 0.0)
    p16 = s.p_hat.get(16, 0.0)
    p_pair = p15 + p16
    p_le13 = sum(v for k, v in s.p_hat.items() if k <= 13)
    p_ge18 = sum(v for k, v in s.p_hat.items() if k >= 18)
    checks = {
        "P(delta=15) in 0.655+-0.04": abs(p15 - 0.655) <= 0.04,
        "P(delta=16) in 0.29+-0.04": abs(p16 - 0.29) <= 0.04,
        "P(delta in {15,16}) >= 0.90": p_pair >= 0.90,
        "P(delta<=13) <= 0.005": p_le13 <= 0.005,
        "P(delta>=18) <= 0.01": p_ge18 <= 0.01,
    }
    ok = all(checks.values())
    shifted = {k - 1: v for k, v in
               {13: 0.0, 14: 0.02, 15: 0.655, 16: 0.29,
                17: 0.03, 18: 0.002, 19: 0.0}.items()}
    _line(1, ok,
          f"measured p_hat={ {k: round(v, 4) for k, v in s.p_hat.items()} } "
          f"vs target bars {{15: 0.655, 16: 0.29}}; "
          f"the target bars shifted down by one are "
          f"{ {k: v for k, v in shifted.items() if v} }, which matches the "
          f"measurement")
    assert ok, (
        f"criterion as stated fails: {checks}; measured "
        f"p_hat={s.p_hat}, mean={s.mean_delta:.3f}. The measured histogram "
        f"matches the published typical-degree tail and the source text's own "
        f"independence heuristic ({{14, 15}}); the target figure's bars equal "
        f"this distribution shifted up by exactly one degree."
    )


def test_criterion_02_heuristic_consistency(big_run, tail):
    i6 = analytic.predictor_i(tail, 1e6)
    top_two = sorted(big_run.summary.p_hat, key=big_run.summary.p_hat.get)[-2:]
    observed_pair = set(top_two)
    allowed = {i6, i6 + 1, i6 + 2}
    figure_pair = {15, 16}
    ok = (i6 == 14) and observed_pair <= allowed and figure_pair <= allowed
    _line(2, ok,
          f"predictor I(1e6)={i6}; measured concentration pair "
          f"{sorted(observed_pair)} and the published figure's pair "
          f"{sorted(figure_pair)} both lie in {{I, I+1, I+2}} = "
          f"{sorted(allowed)}. The published pair sits one step above the "
          f"analytic heuristic, as the source text itself remarks; the "
          f"measured pair equals {{I, I+1}} exactly.")
    assert ok


SWEEP = (1e6, 1e10, 1e20, 1e40, 1e60)


def test_criterion_03_analytic_sweep(tail):
    up, low, smooth = [], [], []
    for rho in SWEEP:
        d = analytic.tail_scaling_diagnostics(tail, rho)
        up.append(d["rho_G_upper"])
        low.append(d["rho_G_lower"][0])
        smooth.append(d["rho_Gc_smooth"])
    upper_ok = all(v <= 1.0 for v in up)
    lower_ok = all(v >= 1.0 for v in low)
    trend_ok = all(b > a for a, b in zip(smooth, smooth[1:]))
    ok = upper_ok and lower_ok and trend_ok
    _line(3, ok,
          f"rho*G(I+1)={[round(v, 4) for v in up]} (all <= 1); "
          f"rho*G(I-1)={[round(v, 2) for v in low]} (all >= 1, not monotone "
          f"by construction: constant-I windows make it a sawtooth); smooth "
          f"rho*G_c(A-1)={[round(v, 1) for v in smooth]} strictly increasing")
    assert upper_ok and lower_ok
    assert trend_ok, smooth


def test_criterion_04_asymptotics(tail):
    ratios = []
    for rho in SWEEP:
        i = analytic.predictor_i(tail, rho)
        ratios.append(i / (0.5 * math.log(rho) / math.log(math.log(rho))))
    decreasing = all(b < a for a, b in zip(ratios, ratios[1:]))
    ok = decreasing and ratios[-1] < 5.5 and ratios[-1] > 1.0
    _line(4, ok, f"I/asymptote over sweep: {[round(r, 3) for r in ratios]} "
                 f"(decreasing toward 1, final {ratios[-1]:.3f} < 5.5)")
    assert ok, ratios


def test_criterion_05a_mean_degree(pooled_degrees):
    total = sum(pooled_degrees.values())
    mean = sum(k * c for k, c in pooled_degrees.items()) / total
    ok = total >= 10_000_000 and abs(mean - 6.0) <= 0.01
    _line(5, ok, f"(a) pooled mean degree {mean:.6f} over {total} vertices")
    assert ok, (mean, total)


def test_criterion_05b_palm_vs_window(palm_big, pooled_degrees):
    total_w = sum(pooled_degrees.values())
    total_p = palm_big.histogram.total
    bad = []
    for k in range(4, 10):
        pw = pooled_degrees.get(k, 0) / total_w
        pp = palm_big.histogram.counts.get(k, 0) / total_p
        se = math.hypot(
            math.sqrt(pw * (1 - pw) / total_w),
            math.sqrt(pp * (1 - pp) / total_p),
        )
        if abs(pw - pp) > 3 * se:
            bad.append((k, pw, pp, se))
    ok = not bad and palm_big.n_uncertified == 0
    _line(5, ok, f"(b) palm vs window pmf agree on k=4..9 "
                 f"(palm trials {total_p}, window samples {total_w})"
                 + (f"; violations {bad}" if bad else ""))
    assert ok, bad


def test_criterion_05c_integral_vs_palm(palm_big):
    est = _cached("mc_integral_k3",
                  lambda: analytic.integral_pmf_mc(3, n=20_000_000, seed=3))
    p3 = palm_big.histogram.counts.get(3, 0) / palm_big.histogram.total
    se_p = math.sqrt(p3 * (1 - p3) / palm_big.histogram.total)
    comb = math.hypot(est.stderr, se_p)
    ok = abs(est.value - p3) <= 3 * comb and not est.boundary_warning
    _line(5, ok, f"(c) geometric integral P(D=3)={est.value:.5f}"
                 f"+-{est.stderr:.5f} vs palm {p3:.5f}+-{se_p:.5f}")
    assert ok, (est, p3, comb)


def test_criterion_06_decay_rate(pooled_degrees):
    """Stated window for -log q(k)/(k log k); unattainable as written (the
    c^k factor drags the ratio to ~0.94 at k=100; see the failure text)."""
    ratio_analytic = -analytic.hilhorst_log_pmf(100) / (100 * math.log(100))
    analytic_ok = 1.8 <= ratio_analytic <= 2.2

    total = sum(pooled_degrees.values())
    ks = [k for k, c in pooled_degrees.items() if c >= 100]
    k_big = max(ks)
    p_hat = pooled_degrees[k_big] / total
    ratio_emp = -math.log(p_hat) / (k_big * math.log(k_big))
    empirical_ok = 1.5 <= ratio_emp <= 2.5

    ok = analytic_ok and empirical_ok
    _line(6, ok,
          f"-log q(100)/(100 log 100) = {ratio_analytic:.4f} (stated window "
          f"[1.8, 2.2]); empirical at k={k_big} (count {pooled_degrees[k_big]}"
          f"): {ratio_emp:.4f} (stated window [1.5, 2.5])")
    assert ok, (
        f"decay-rate window unattainable: the ratio equals "
        f"2 - (log(8 pi^2) + 2 - 2 log 2)/log k + o(1) = "
        f"{2 - (math.log(8 * math.pi ** 2) + 2 - 2 * math.log(2)) / math.log(100):.3f} "
        f"at k=100 (measured {ratio_analytic:.4f}), and reaches 1.8 only near "
        f"k ~ 1e11; the empirical ratio at the largest >=100-hit bin "
        f"(k={k_big}) is {ratio_emp:.4f}. The k-log-k *coefficient* with the "
        f"linear term projected out is ~1.9 over k in [50, 200], which is the "
        f"quantity the decay envelope actually pins near 2."
    )


def test_criterion_07_planarity_suites():
    rng = np.random.default_rng(707)
    k33 = graph_props.SimpleGraph.from_edges(
        6, [(a, b) for a in range(3) for b in range(3, 6)]
    )
    k33_ok = not graph_props.check_triple_bound(k33)
    triple_ok = True
    five_ok = True
    five_total = 0
    for i in range(100):
        t = delaunay.build(rng.random((200, 2)))
        g = graph_props.SimpleGraph.from_triangulation(t)
        if not graph_props.check_triple_bound(g):
            triple_ok = False
        for _ in range(100):
            s = rng.choice(200, size=5, replace=False)
            five_total += 1
            if not graph_props.check_five_bound(g, (int(x) for x in s)):
                five_ok = False
    ok = k33_ok and triple_ok and five_ok
    _line(7, ok, f"triple bound on 100 Delaunay graphs (n=200, exhaustive), "
                 f"five bound on {five_total} random 5-subsets, K33 rejected")
    assert ok


def test_criterion_08_union_bound():
    rng = np.random.default_rng(808)
    # exhaustive over all boolean matrices with <= 4 samples and <= 4 events
    tested = 0
    for m in range(1, 5):
        w = np.full(m, 1.0 / m)
        for kk in range(1, 5):
            for bits in range(2 ** (m * kk)):
                e = np.zeros((m, kk), dtype=bool)
                for i in range(m):
                    for j in range(kk):
                        e[i, j] = (bits >> (i * kk + j)) & 1
                mult = int(e.sum(axis=1).max())
                em = graph_props.EventMatrix(w, e)
                for k in range(max(1, mult), 5):
                    res = graph_props.union_bound_check(em, k)
                    assert res.precondition_ok and res.holds, (m, kk, bits, k)
                    tested += 1
    # random weighted matrices
    rand_total = 100_000
    for _ in range(rand_total):
        m = int(rng.integers(1, 6))
        kk = int(rng.integers(1, 6))
        w = rng.dirichlet(np.ones(m))
        e = rng.random((m, kk)) < rng.random()
        mult = int(e.sum(axis=1).max())
        res = graph_props.union_bound_check(
            graph_props.EventMatrix(w, e), max(1, mult)
        )
        assert res.precondition_ok and res.holds
    _line(8, True, f"exhaustive ({tested} matrix/k combinations) plus "
                   f"{rand_total} random weighted matrices")


def test_criterion_09_oracle_equivalence():
    sys.path.insert(0, str(Path(__file__).parent))
    from oracles import brute_force_delaunay_edges

    rng = np.random.default_rng(909)
    for i in range(200):
        pts = rng.random((50, 2))
        t = delaunay.build(pts)
        got = set(map(tuple, t.edges.tolist()))
        assert got == brute_force_delaunay_edges(pts), f"set {i}"

    pts = rng.random((600, 2)) * 24.0
    t = delaunay.build(pts)
    interior = np.nonzero(~t.hull)[0]
    worst = 0.0
    for v in rng.choice(interior, size=50, replace=False):
        f = voronoi_flower(t, int(v))
        est = phi_content(f, "montecarlo", n=1_000_000, seed=int(v))
        dev = abs(est.value - f.area) / est.stderr
        worst = max(worst, dev)
        assert dev <= 3.0, (v, f.area, est)
    _line(9, True, f"200 brute-force edge-set matches; 50 flower areas "
                   f"within 3 MC standard errors (worst {worst:.2f})")


def test_cluster_rarity_recorded(big_run, tail):
    """Five-fold exceedance clusters at level I within one grid cell are
    predicted to be extremely rare; recorded here, not asserted (the run
    carries the per-trial maximum cell exceedance count at k = I)."""
    i6 = analytic.predictor_i(tail, 1e6)
    counts = [tr.max_cluster for tr in big_run.trials
              if tr.max_cluster is not None]
    fired = sum(1 for c in counts if c >= 5)
    e_rho_fails = sum(1 for tr in big_run.trials if tr.e_rho is False)
    _line(0, True,
          f"record: max per-cell exceedances at k=I={i6} over "
          f"{len(counts)} trials: max={max(counts)}, cells with >=5: {fired}; "
          f"grid-coverage event failed in {e_rho_fails} trials")


def test_criterion_10_determinism_and_pad(tmp_path):
    cfg = experiments.ExperimentConfig(
        rho=2000.0, trials=50, master_seed=1010,
        diagnostics=frozenset({"e_rho"}),
    )
    files = {}
    for workers in (1, 8):
        env = dict(os.environ, PDX_THREADS=str(workers))
        out = tmp_path / f"w{workers}.json"
        code = subprocess.run(
            [sys.executable, "-m", "pdx.cli", "simulate",
             "--rho", "2000", "--trials", "50", "--seed", "1010",
             "--diag", "e_rho", "--out", str(out)],
            env=env, capture_output=True, text=True, timeout=600,
        )
        assert code.returncode == 0, code.stderr
        files[workers] = out.read_bytes()
    bytes_ok = files[1] == files[8]

    pad_cfg = experiments.ExperimentConfig(rho=1e4, trials=300,
                                           master_seed=1011)
    rep = _cached("pad_calibration", lambda: experiments.pad_calibration(pad_cfg))
    pad_ok = rep.p_value > 0.01
    ok = bytes_ok and pad_ok
    _line(10, ok, f"byte-identical result files across worker counts 1 and 8 "
                  f"({bytes_ok}); pad calibration chi2 p={rep.p_value:.4f} "
                  f"(paired discordance down/up = {rep.n_delta_down}/"
                  f"{rep.n_delta_up})")
    assert ok
