"""Critical points of periodic-orbit multiplier maps for the quadratic
family z^2 + c.

The multiplier of a period-n orbit, viewed as an algebraic function of the
parameter c on the period-n curve, has finitely many critical points. This
package counts them exactly, finds them numerically by a three-dimensional
Newton search, certifies the c=0 cases by an exact exponential sum, and
persists and plots the results.
"""

from .analysis import (
    MandelbrotVerdict,
    RationalAngle,
    StatsRow,
    annotate_membership,
    c0_derivative,
    c0_periodic_angles,
    c0_scan,
    c0_scan_detailed,
    mandelbrot_member,
    stats,
)
from .dynamics import (
    CountingTable,
    Jet3,
    euler_phi,
    multiplier,
    multiplier_critical_bound,
    multiplier_derivative_jet,
    multiplier_derivative_product,
    orbit_jet,
    orbit_points,
    periodic_point_count,
    periodic_point_derivative,
    projection_critical_count,
    rel_err,
)
from .errors import (
    BoundOverflowError,
    DocumentFormatError,
    DomainError,
    IncompleteRootsError,
    InconsistentRootError,
    JetOverflowError,
    MultcritError,
    NonGenericParameterError,
    OrbitGroupingError,
    ParabolicChartError,
    SolveFailed,
    VerificationRejected,
)
from .io import (
    CSV_COLUMNS,
    ResultDocument,
    VerifyReport,
    parse_json,
    read_document,
    serialize_json,
    to_csv,
    verify_document,
    write_document,
)
from .periodic import (
    Orbit,
    RootConfig,
    escape_radius,
    find_periodic_roots,
    group_into_orbits,
    initial_guesses,
    minimal_period,
)
from .solver import (
    CriticalPointRecord,
    ResultSet,
    SearchConfig,
    SystemState,
    conjugate_record,
    dedup_insert,
    jacobian,
    newton_solve,
    orbit_distance,
    residual,
    search,
    verify_solution,
)
from .svgplot import render_svg, write_svg

__version__ = "0.1.0"

__all__ = [
    "BoundOverflowError",
    "CSV_COLUMNS",
    "CountingTable",
    "CriticalPointRecord",
    "DocumentFormatError",
    "DomainError",
    "IncompleteRootsError",
    "InconsistentRootError",
    "Jet3",
    "JetOverflowError",
    "MandelbrotVerdict",
    "MultcritError",
    "NonGenericParameterError",
    "Orbit",
    "OrbitGroupingError",
    "ParabolicChartError",
    "RationalAngle",
    "ResultDocument",
    "ResultSet",
    "RootConfig",
    "SearchConfig",
    "SolveFailed",
    "StatsRow",
    "SystemState",
    "VerificationRejected",
    "VerifyReport",
    "annotate_membership",
    "c0_derivative",
    "c0_periodic_angles",
    "c0_scan",
    "c0_scan_detailed",
    "conjugate_record",
    "dedup_insert",
    "escape_radius",
    "euler_phi",
    "find_periodic_roots",
    "group_into_orbits",
    "initial_guesses",
    "jacobian",
    "mandelbrot_member",
    "minimal_period",
    "multiplier",
    "multiplier_critical_bound",
    "multiplier_derivative_jet",
    "multiplier_derivative_product",
    "newton_solve",
    "orbit_distance",
    "orbit_jet",
    "orbit_points",
    "parse_json",
    "periodic_point_count",
    "periodic_point_derivative",
    "projection_critical_count",
    "read_document",
    "rel_err",
    "render_svg",
    "residual",
    "search",
    "serialize_json",
    "stats",
    "to_csv",
    "verify_document",
    "verify_solution",
    "write_document",
    "write_svg",
]
