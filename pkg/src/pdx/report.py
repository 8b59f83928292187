"""Result serialization: canonical JSON, CSV projection, SVG bar chart.

JSON is the canonical format; keys are emitted in a fixed documented order
so identical runs produce byte-identical files.  The CSV projection holds
only the maximum-degree histogram.  The SVG is written by hand (static bar
chart, no plotting dependency).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from pdx.errors import SchemaError
from pdx.experiments import (
    ExperimentConfig,
    ExperimentResult,
    Summary,
    TrialResult,
    summarize,
)

SCHEMA_VERSION = "1"


@dataclass
class ResultFile:
    schema_version: str
    config: ExperimentConfig
    trials: list[TrialResult]
    summary: Summary


def _int_key_map(d: dict) -> dict:
    return {str(k): d[k] for k in sorted(d)}


def _config_obj(c: ExperimentConfig) -> dict:
    return {
        "rho": c.rho,
        "trials": c.trials,
        "master_seed": c.master_seed,
        "alpha": c.alpha,
        "pad_factor": c.pad_factor,
        "workers": c.workers,
        "diagnostics": sorted(c.diagnostics),
    }


def _trial_obj(t: TrialResult) -> dict:
    return {
        "trial_index": t.trial_index,
        "delta": t.delta,
        "n_points": t.n_points,
        "n_boundary_unsafe": t.n_boundary_unsafe,
        "exceedances": _int_key_map(t.exceedances),
        "degree_hist": _int_key_map(t.degree_hist),
        "e_rho": t.e_rho,
        "max_cluster": t.max_cluster,
    }


def _summary_obj(s: Summary) -> dict:
    return {
        "rho": s.rho,
        "trials": s.trials,
        "i_rho": s.i_rho,
        "j_rho": s.j_rho,
        "histogram": _int_key_map(s.histogram),
        "p_hat": _int_key_map(s.p_hat),
        "stderr": _int_key_map(s.stderr),
        "p_two": s.p_two,
        "p_two_stderr": s.p_two_stderr,
        "mean_delta": s.mean_delta,
        "n_no_vertex": s.n_no_vertex,
    }


def result_to_obj(result: ExperimentResult | ResultFile) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "config": _config_obj(result.config),
        "trials": [_trial_obj(t) for t in result.trials],
        "summary": _summary_obj(result.summary),
    }


def write_result(path, result: ExperimentResult | ResultFile) -> None:
    obj = result_to_obj(result)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        json.dump(obj, fh, separators=(",", ":"), allow_nan=False)
        fh.write("\n")


def _parse_int_keys(d: dict, cast=int) -> dict:
    return {int(k): cast(v) for k, v in d.items()}


def read_result(path) -> ResultFile:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)  # malformed input raises with a char offset
    if not isinstance(obj, dict) or "schema_version" not in obj:
        raise SchemaError("not a result file: missing schema_version")
    if obj["schema_version"] != SCHEMA_VERSION:
        raise SchemaError(
            f"schema version {obj['schema_version']!r} != {SCHEMA_VERSION!r}"
        )
    c = obj["config"]
    config = ExperimentConfig(
        rho=c["rho"],
        trials=c["trials"],
        master_seed=c["master_seed"],
        alpha=c["alpha"],
        pad_factor=c["pad_factor"],
        workers=c["workers"],
        diagnostics=frozenset(c["diagnostics"]),
    )
    trials = [
        TrialResult(
            trial_index=t["trial_index"],
            delta=t["delta"],
            n_points=t["n_points"],
            n_boundary_unsafe=t["n_boundary_unsafe"],
            exceedances=_parse_int_keys(t["exceedances"]),
            degree_hist=_parse_int_keys(t["degree_hist"]),
            e_rho=t["e_rho"],
            max_cluster=t["max_cluster"],
        )
        for t in obj["trials"]
    ]
    s = obj["summary"]
    summary = Summary(
        rho=s["rho"],
        trials=s["trials"],
        i_rho=s["i_rho"],
        j_rho=s["j_rho"],
        histogram=_parse_int_keys(s["histogram"]),
        p_hat=_parse_int_keys(s["p_hat"], float),
        stderr=_parse_int_keys(s["stderr"], float),
        p_two=s["p_two"],
        p_two_stderr=s["p_two_stderr"],
        mean_delta=s["mean_delta"],
        n_no_vertex=s["n_no_vertex"],
    )
    return ResultFile(obj["schema_version"], config, trials, summary)


def verify_roundtrip(result: ResultFile) -> bool:
    """True iff the stored summary equals one recomputed from the trials."""
    return summarize(result.config, result.trials) == result.summary


def write_histogram_csv(path, histogram: dict[int, int]) -> None:
    """Rows `degree,count,probability`, ascending by degree."""
    total = sum(histogram.values())
    lines = ["degree,count,probability"]
    for k in sorted(histogram):
        c = histogram[k]
        p = c / total if total else 0.0
        lines.append(f"{k},{c},{p!r}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def write_histogram_svg(path, p_hat: dict[int, float],
                        title: str = "") -> None:
    """Static bar chart: degree on x, empirical probability on y."""
    keys = sorted(p_hat)
    if not keys:
        raise ValueError("empty histogram")
    width, height = 480, 360
    ml, mr, mt, mb = 64, 16, 28, 56
    plot_w = width - ml - mr
    plot_h = height - mt - mb
    bw = plot_w / len(keys)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" '
            f'font-size="13" font-family="sans-serif">{title}</text>'
        )
    # y axis with ticks at 0, .25, .5, .75, 1
    for i in range(5):
        frac = i / 4.0
        y = mt + plot_h * (1.0 - frac)
        parts.append(
            f'<line x1="{ml - 4}" y1="{y:.1f}" x2="{ml}" y2="{y:.1f}" '
            f'stroke="black"/>'
        )
        parts.append(
            f'<text x="{ml - 8}" y="{y + 4:.1f}" text-anchor="end" '
            f'font-size="11" font-family="sans-serif">{frac:g}</text>'
        )
    parts.append(
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + plot_h}" stroke="black"/>'
    )
    parts.append(
        f'<line x1="{ml}" y1="{mt + plot_h}" x2="{ml + plot_w}" '
        f'y2="{mt + plot_h}" stroke="black"/>'
    )
    for i, k in enumerate(keys):
        p = max(0.0, min(1.0, p_hat[k]))
        bh = plot_h * p
        x = ml + i * bw + 0.15 * bw
        parts.append(
            f'<rect x="{x:.1f}" y="{mt + plot_h - bh:.1f}" '
            f'width="{0.7 * bw:.1f}" height="{bh:.1f}" fill="#4878a8"/>'
        )
        parts.append(
            f'<text x="{ml + (i + 0.5) * bw:.1f}" y="{mt + plot_h + 16}" '
            f'text-anchor="middle" font-size="11" '
            f'font-family="sans-serif">{k}</text>'
        )
    parts.append(
        f'<text x="{ml + plot_w / 2:.1f}" y="{height - 12}" '
        f'text-anchor="middle" font-size="12" '
        f'font-family="sans-serif">Maximal Degree</text>'
    )
    parts.append(
        f'<text x="16" y="{mt + plot_h / 2:.1f}" text-anchor="middle" '
        f'font-size="12" font-family="sans-serif" '
        f'transform="rotate(-90 16 {mt + plot_h / 2:.1f})">'
        f'Empirical Probability</text>'
    )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(parts) + "\n")
