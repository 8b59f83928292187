"""Command-line interface.

Subcommands: simulate, predict, pmf, palm, verify, hist.  Usage errors exit
with status 2 (argparse default); a failed verify suite exits with 1.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np


def _add_simulate(sub):
    p = sub.add_parser("simulate", help="run a maximal-degree experiment")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--alpha", type=float, default=2.5)
    p.add_argument("--pad-factor", type=float, default=4.0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--diag", type=str, default="",
                   help="comma list: clusters,e_rho,block_tail,pad_check")
    p.add_argument("--block-side", type=float, default=10.0,
                   help="block side for the block_tail diagnostic")
    p.add_argument("--block-k", type=int, default=9,
                   help="degree threshold for the block_tail diagnostic")


def _cmd_simulate(args) -> int:
    from pdx import experiments, report

    diags = {d for d in args.diag.split(",") if d}
    extra = diags - {"clusters", "e_rho", "block_tail", "pad_check"}
    if extra:
        print(f"unknown --diag values: {sorted(extra)}", file=sys.stderr)
        return 2
    config = experiments.ExperimentConfig(
        rho=args.rho,
        trials=args.trials,
        master_seed=args.seed,
        alpha=args.alpha,
        pad_factor=args.pad_factor,
        workers=args.workers,
        diagnostics=frozenset(diags & {"clusters", "e_rho"}),
    )
    partial = args.out + ".partial" if args.out else None
    result = experiments.run_experiment(config, partial_path=partial)
    s = result.summary
    mean = "n/a" if s.mean_delta is None else f"{s.mean_delta:.4f}"
    if s.i_rho is None:
        print(f"rho={s.rho:g} trials={s.trials} mean_delta={mean} "
              f"(rho below the analytic model's range)")
    else:
        print(f"rho={s.rho:g} trials={s.trials} I={s.i_rho} J={s.j_rho} "
              f"mean_delta={mean} "
              f"p_two=P(delta in {{{s.i_rho},{s.i_rho + 1}}})={s.p_two:.4f}")
    for k in sorted(s.histogram):
        print(f"  delta={k}: {s.histogram[k]} ({s.p_hat[k]:.4f} "
              f"+- {s.stderr[k]:.4f})")
    if "block_tail" in diags:
        r = experiments.block_tail_check(config, args.block_side, args.block_k)
        print(f"block_tail: P(M>= {r.k}) = {r.p_block:.4f} +- "
              f"{r.p_block_stderr:.4f}; bounds [{r.lower_bound:.4f}, "
              f"{r.upper_bound:.4f}]"
              + (" (low power)" if r.low_power else ""))
    if "pad_check" in diags:
        r = experiments.pad_calibration(config)
        print(f"pad_check: chi2={r.chi2:.3f} dof={r.dof} p={r.p_value:.4f} "
              f"paired down/up={r.n_delta_down}/{r.n_delta_up}")
    if args.out:
        if args.format == "json":
            report.write_result(args.out, result)
        else:
            report.write_histogram_csv(args.out, s.histogram)
        print(f"wrote {args.out}")
    return 0


def _add_predict(sub):
    p = sub.add_parser("predict", help="analytic predictor for a window")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--model", type=str, default="hilhorst",
                   help="hilhorst or parametric:C")


def _parse_model(spec: str, dim: int):
    from pdx import analytic

    if spec == "hilhorst":
        return analytic.build_model("hilhorst", dim=2)
    if spec.startswith("parametric:"):
        c = float(spec.split(":", 1)[1])
        return analytic.build_model("parametric", dim=dim, c=c)
    raise ValueError(f"unknown model {spec!r}")


def _cmd_predict(args) -> int:
    from pdx import analytic

    try:
        model = _parse_model(args.model, args.dim)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 2
    tail = analytic.interpolate(model)
    i = analytic.predictor_i(tail, args.rho)
    j = analytic.predictor_j(tail, args.rho, args.dim)
    ld = analytic.l_d(args.dim)
    asym = analytic.asymptotic_max_degree(args.rho, args.dim)
    print(f"I={i} J={j} l_d={ld} asymptotic={asym:.4f}")
    return 0


def _add_pmf(sub):
    p = sub.add_parser("pmf", help="typical-degree pmf table (Hilhorst)")
    p.add_argument("--kmax", type=int, default=20)


def _cmd_pmf(args) -> int:
    from pdx import analytic

    model = analytic.build_model("hilhorst", k_max=max(args.kmax + 1, 30))
    print("k\tq(k)\tG(k)")
    for k in range(3, args.kmax + 1):
        q = analytic.hilhorst_pmf(k)
        if k >= model.k_min:
            print(f"{k}\t{q:.6e}\t{model.G(k):.6e}")
        else:
            print(f"{k}\t{q:.6e}\t-")
    return 0


def _add_palm(sub):
    p = sub.add_parser("palm", help="typical-degree histogram via Palm runs")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=None)


def _cmd_palm(args) -> int:
    from pdx import experiments

    res = experiments.palm_run(args.rho, args.trials, args.seed,
                               workers=args.workers)
    pmf = res.histogram.pmf()
    print(f"rho={args.rho:g} trials={args.trials} "
          f"mean={res.histogram.mean():.4f} "
          f"uncertified={res.n_uncertified}")
    for k, p in pmf.items():
        print(f"  deg={k}: {res.histogram.counts[k]} ({p:.5f})")
    return 0


def _add_verify(sub):
    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("--suite", required=True,
                   choices=("planarity", "flower", "union", "mcintegral"))
    p.add_argument("--seed", type=int, default=0)


def _verify_planarity(seed: int) -> list[tuple[str, bool]]:
    from pdx import delaunay, graph_props

    rng = np.random.default_rng(seed)
    checks = []
    for i in range(20):
        t = delaunay.build(rng.random((200, 2)))
        g = graph_props.SimpleGraph.from_triangulation(t)
        checks.append((f"triple bound, graph {i}",
                       bool(graph_props.check_triple_bound(g))))
        for _ in range(50):
            s = rng.choice(200, size=5, replace=False)
            if not graph_props.check_five_bound(g, s):
                checks.append((f"five bound, graph {i}", False))
                break
        else:
            checks.append((f"five bound, graph {i}", True))
    k33 = graph_props.SimpleGraph.from_edges(
        6, [(a, b) for a in range(3) for b in range(3, 6)]
    )
    checks.append(("K_{3,3} rejected",
                   not graph_props.check_triple_bound(k33)))
    return checks


def _verify_flower(seed: int) -> list[tuple[str, bool]]:
    from pdx import delaunay, flowers

    rng = np.random.default_rng(seed)
    checks = []
    pts = rng.random((400, 2)) * 20
    t = delaunay.build(pts)
    interior = np.nonzero(~t.hull)[0]
    for v in rng.choice(interior, size=8, replace=False):
        f = flowers.voronoi_flower(t, int(v))
        est = flowers.phi_content(f, "montecarlo", n=200_000, seed=seed)
        ok = abs(est.value - f.area) <= 4.0 * max(est.stderr, 1e-12)
        checks.append((f"flower {v}: exact {f.area:.5f} vs mc "
                       f"{est.value:.5f}", ok))
    return checks


def _verify_union(seed: int) -> list[tuple[str, bool]]:
    from pdx import graph_props

    rng = np.random.default_rng(seed)
    checks = []
    bad = 0
    tested = 0
    for _ in range(20_000):
        m = rng.integers(1, 5)
        kk = rng.integers(1, 5)
        w = rng.dirichlet(np.ones(m))
        e = rng.random((m, kk)) < 0.5
        em = graph_props.EventMatrix(w, e)
        mult = int(e.sum(axis=1).max())
        res = graph_props.union_bound_check(em, max(1, mult))
        tested += 1
        if not res:
            bad += 1
    checks.append((f"union bound on {tested} random matrices", bad == 0))
    return checks


def _verify_mcintegral(seed: int) -> list[tuple[str, bool]]:
    import math

    from pdx import analytic, experiments

    est = analytic.integral_pmf_mc(3, n=600_000, seed=seed)
    palm = experiments.palm_run(rho=1000.0, trials=3000, seed=seed)
    p3 = palm.histogram.counts.get(3, 0) / palm.histogram.total
    se_palm = math.sqrt(max(p3 * (1 - p3), 1e-12) / palm.histogram.total)
    comb = math.hypot(est.stderr, se_palm)
    ok = abs(est.value - p3) <= 4.0 * comb
    return [(f"integral {est.value:.5f} vs palm {p3:.5f} "
             f"(combined se {comb:.5f})", ok)]


def _cmd_verify(args) -> int:
    suites = {
        "planarity": _verify_planarity,
        "flower": _verify_flower,
        "union": _verify_union,
        "mcintegral": _verify_mcintegral,
    }
    checks = suites[args.suite](args.seed)
    failed = 0
    for name, ok in checks:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}")
        if not ok:
            failed += 1
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return 1 if failed else 0


def _add_hist(sub):
    p = sub.add_parser("hist", help="render a result file as an SVG chart")
    p.add_argument("--in", dest="inpath", required=True)
    p.add_argument("--svg", dest="svgpath", required=True)


def _cmd_hist(args) -> int:
    from pdx import report

    rf = report.read_result(args.inpath)
    title = f"rho={rf.summary.rho:g}, {rf.summary.trials} trials"
    report.write_histogram_svg(args.svgpath, rf.summary.p_hat, title=title)
    print(f"wrote {args.svgpath}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="pdx",
        description="Poisson-Delaunay maximal-degree simulation and analytics",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_simulate(sub)
    _add_predict(sub)
    _add_pmf(sub)
    _add_palm(sub)
    _add_verify(sub)
    _add_hist(sub)
    args = parser.parse_args(argv)
    handlers = {
        "simulate": _cmd_simulate,
        "predict": _cmd_predict,
        "pmf": _cmd_pmf,
        "palm": _cmd_palm,
        "verify": _cmd_verify,
        "hist": _cmd_hist,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
