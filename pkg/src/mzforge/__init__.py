"""Polynomial sampling families in the Bergman and Hardy spaces of the unit disk.

Build candidate point families, compute their sharp sampling constants for
the space of polynomials of degree at most ``n``, and check the kernel,
counting and contraction inequalities behind them.
"""

from .certifier import (
    CarlesonReport,
    FrameReport,
    SweepResult,
    WeightPolicy,
    carleson_check,
    frame_matrix,
    sharp_bounds,
    sweep,
    truncation_gamma,
)
from .config import ExperimentConfig, Tolerances
from .cpoly import (
    Polynomial,
    SpaceKind,
    annulus_mass,
    dilate,
    disk_mass,
    evaluate,
    minimum_phase_shrink,
    norm_sq,
    random_polynomial,
    reflect_outside_roots,
    roots,
)
from .families import (
    ContractionTrace,
    RadiiMode,
    RadiiPolicy,
    bergman_truncate,
    contraction_iterate,
    contraction_step,
    example27,
    hyperbolic_lattice,
    lift_to_annulus,
    make_family,
    torus_equispaced,
)
from .geometry import (
    GeometryReport,
    PointFamily,
    Region,
    classify_region,
    count_report,
    hausdorff_ladder,
    hausdorff_trunc,
    in_boundary_annulus,
    in_bulk,
    project_torus,
    pseudo_dist,
    separation,
    separation_decompose,
)
from .kernels import (
    KernelBoundReport,
    c_gamma,
    check_kernel_bounds,
    find_n_gamma,
    kernel_diag,
    kernel_full,
    kernel_full_diag,
    kernel_normalized,
    kernel_trunc,
)
from .lemmas import CHECKS, LemmaResult

__version__ = "0.1.0"
