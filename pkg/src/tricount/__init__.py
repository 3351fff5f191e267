"""Exact counting and analytic growth constants for primitive lattice
triangulations of rectangles."""

from .geometry import (
    LatticePolygon,
    PrimitiveTile,
    ShapeProfile,
    TileKind,
    Triangulation,
    brute_force_count,
    doubled_area,
    enumerate_maximal_tiles,
    enumerate_triangulations,
    rectangle,
    trapezoid_height2,
    trapezoid_height3,
    unit_strip_shape,
)
from .counting import (
    CapacityRecord,
    CountCache,
    ResidueVector,
    capacity,
    capacity_extrapolate,
    convexity_check,
    count_rectangle,
    count_shape,
    crt_reconstruct,
    default_primes,
    subshape_expansion,
)
from .series import (
    G_closed,
    G_series,
    Hstar_from_H,
    PowerSeries,
    alpha_c2,
    f_abc,
    gstar_coeffs,
    np_upper_bound,
)
from .fredholm import (
    C3Result,
    CirclePoint,
    LaurentSeries,
    NystromSystem,
    PrecisionContext,
    RootBracket,
    H_eval,
    eval_P,
    eval_Phi,
    eval_Psi,
    g_series,
    h_series,
    kernel_and_rhs,
    nystrom_solve,
    phi_series,
    psi_series,
    solve_x0_c3,
    unit_disk_roots,
)
from .bounds import (
    ErrorBudget,
    GridCertificate,
    alpha_n_and_C_bound,
    grid_min_certify,
    nystrom_error_estimate,
    quadrature_error_bound,
    uniqueness_certify,
)

__version__ = "0.1.0"
