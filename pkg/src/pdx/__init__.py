"""pdx: maximal-degree statistics of planar Poisson-Delaunay graphs.

Simulation engine (Poisson sampling, exact Delaunay triangulation, degree
and Voronoi-flower statistics) plus the analytic typical-degree predictor,
with a Monte-Carlo harness testing the two-point concentration of the
window maximum.
"""

from pdx._kernel import BACKEND as kernel_backend
from pdx.analytic import (
    asymptotic_max_degree,
    build_model,
    hilhorst_pmf,
    integral_pmf_mc,
    interpolate,
    l_d,
    one_value_windows,
    predictor_i,
    predictor_j,
    tail_scaling_diagnostics,
)
from pdx.degree_stats import (
    Box,
    GridSubdivision,
    Histogram,
    cell_distance,
    cell_of,
    cluster_count,
    degree_records,
    e_rho_holds,
    empirical_pmf,
    exceedance_count,
    max_degree,
    subdivide,
)
from pdx.delaunay import Triangulation, build, degree
from pdx.experiments import (
    ExperimentConfig,
    block_tail_check,
    pad_calibration,
    palm_run,
    run_experiment,
    run_trial,
)
from pdx.flowers import Flower, phi_content, voronoi_flower
from pdx.geom import Disk, Point2, circumdisk, incircle, orient2d
from pdx.graph_props import (
    EventMatrix,
    SimpleGraph,
    check_five_bound,
    check_triple_bound,
    common_neighbors,
    union_bound_check,
)
from pdx.report import read_result, write_result
from pdx.sampling import Sample, Window, add_origin, sample_poisson

__version__ = "0.1.0"

__all__ = [
    "kernel_backend",
    "__version__",
    # geometry and triangulation
    "Point2", "Disk", "orient2d", "incircle", "circumdisk",
    "Triangulation", "build", "degree",
    # sampling
    "Window", "Sample", "sample_poisson", "add_origin",
    # flowers
    "Flower", "voronoi_flower", "phi_content",
    # degree statistics
    "Box", "GridSubdivision", "Histogram", "degree_records", "max_degree",
    "exceedance_count", "cluster_count", "subdivide", "cell_of",
    "cell_distance", "e_rho_holds", "empirical_pmf",
    # analytic model
    "hilhorst_pmf", "build_model", "interpolate", "predictor_i",
    "predictor_j", "l_d", "asymptotic_max_degree", "one_value_windows",
    "tail_scaling_diagnostics", "integral_pmf_mc",
    # graph properties
    "SimpleGraph", "EventMatrix", "common_neighbors", "check_triple_bound",
    "check_five_bound", "union_bound_check",
    # experiments and reporting
    "ExperimentConfig", "run_trial", "run_experiment", "palm_run",
    "block_tail_check", "pad_calibration", "read_result", "write_result",
]
