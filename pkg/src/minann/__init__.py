"""Minimal annuli in a slab: construction, measurement, and comparisons.

The package builds conformal minimal annuli from pairs of Laurent-polynomial
square-root factors, measures circle lengths, level curves, slab areas, and
total curvature, and runs a catalog of named, machine-checkable comparisons
against catenoid covers.
"""

from .errors import (
    DomainError,
    EmptySlabError,
    EmptyWindowError,
    GeometryError,
    HeightRangeError,
    InadmissibleParametersError,
    InadmissibleWindowError,
    NonMonotoneRayError,
    NumericalError,
    ParityUndeterminedError,
    PreconditionError,
    SchemaError,
    ValidationError,
)
from .laurent import AnnulusWindow, LaurentPoly, circle_l2, roots, trapezoid_circle
from .weierstrass import (
    FluxVector,
    Parity,
    PeriodVerdict,
    Slab,
    WeierstrassData,
    data_from_json,
    data_to_json,
    flux,
    from_fg,
    from_g_pair,
    gauss_winding,
    height,
    immerse,
    metric_factor,
    period_check,
    symmetry_check,
    winding_class,
)
from .measures import (
    CatenoidParams,
    CircleLengthProfile,
    ConvexityReport,
    LevelCurve,
    catenoid_area,
    catenoid_level_length,
    circle_length,
    circle_length_dd,
    circle_length_dd_fd,
    convexity_report,
    length_profile,
    level_radii,
    level_radius,
    planar_self_intersections,
    profile_radii,
    traversal_multiplicity,
    marginal_waist_ratio,
    marginally_stable_waist,
    slab_area,
    total_curvature,
    trace_level,
    waist_height,
)
from .families import (
    FigureEightParams,
    PerturbedCoverParams,
    admissible_annulus,
    attained_height_range,
    catenoid_cover,
    clip_to_slab,
    family_from_spec,
    figure_eight,
    figure_eight_pair,
    perturbed_two_cover,
    perturbed_two_cover_pair,
)
from .experiments import (
    MeasureReport,
    Scenario,
    SCENARIOS,
    Verdict,
    classify_levels,
    compare_areas,
    compare_lengths,
    random_even_vertical_flux,
    random_three_term_pair,
    run_scenario,
    sweep_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "AnnulusWindow",
    "CatenoidParams",
    "CircleLengthProfile",
    "ConvexityReport",
    "DomainError",
    "EmptySlabError",
    "EmptyWindowError",
    "FigureEightParams",
    "FluxVector",
    "GeometryError",
    "HeightRangeError",
    "InadmissibleParametersError",
    "InadmissibleWindowError",
    "LaurentPoly",
    "LevelCurve",
    "MeasureReport",
    "NumericalError",
    "Parity",
    "ParityUndeterminedError",
    "PeriodVerdict",
    "PerturbedCoverParams",
    "PreconditionError",
    "SCENARIOS",
    "Scenario",
    "NonMonotoneRayError",
    "SchemaError",
    "Slab",
    "ValidationError",
    "Verdict",
    "WeierstrassData",
    "admissible_annulus",
    "attained_height_range",
    "catenoid_area",
    "catenoid_cover",
    "catenoid_level_length",
    "circle_l2",
    "circle_length",
    "circle_length_dd",
    "circle_length_dd_fd",
    "classify_levels",
    "clip_to_slab",
    "compare_areas",
    "compare_lengths",
    "convexity_report",
    "data_from_json",
    "data_to_json",
    "family_from_spec",
    "figure_eight",
    "figure_eight_pair",
    "flux",
    "from_fg",
    "from_g_pair",
    "gauss_winding",
    "height",
    "immerse",
    "length_profile",
    "level_radii",
    "level_radius",
    "metric_factor",
    "planar_self_intersections",
    "profile_radii",
    "random_even_vertical_flux",
    "random_three_term_pair",
    "traversal_multiplicity",
    "marginal_waist_ratio",
    "marginally_stable_waist",
    "perturbed_two_cover",
    "perturbed_two_cover_pair",
    "period_check",
    "run_scenario",
    "roots",
    "slab_area",
    "symmetry_check",
    "total_curvature",
    "trace_level",
    "trapezoid_circle",
    "waist_height",
    "winding_class",
    "__version__",
]
