"""Favard length, conical densities, Lipschitz-graph extraction and line-pair measures for segment sets."""

from ._backend import BACKEND, HAS_NUMBA
from .config import AnalysisConfig
from .errors import (
    AssumptionViolated,
    CollinearOverlap,
    CurvesTooClose,
    DegenerateInput,
    DegeneratePair,
    EmptyResult,
    FavardLabError,
    InsufficientBuckets,
    ParseError,
    QuadratureNotConverged,
    StageError,
    ValidationError,
    WitnessFailed,
)
from .favard import (
    FavardReport,
    crofton_integral,
    crofton_quadrature,
    eta_measure_hitting,
    favard_defect,
    favard_length,
    favard_report,
    projection_measure,
)
from .conical import besicovitch_alternative, conical_mass, high_density_points, max_conical_density
from .geometry import AffineLine, IntervalUnion, Polyline, Segment, SegmentSet, Tube
from .graphs import cone_condition_check, cover_by_single_graph, two_cones_extract
from .grid import energy_I1, generate_grid_set, lipschitz_intersection_mass
from .line_pairs import CurveWithTangents, monte_carlo_pair_measure, pair_line_measure_formula, pair_line_measure_oracle
from .quadrature import QuadratureConfig
from .scene import load_scene, parse_scene
from .structure import analyze, build_witness, case_split, defect_certificate, minigraph_decompose

__all__ = [
    "BACKEND",
    "HAS_NUMBA",
    "AffineLine",
    "AnalysisConfig",
    "AssumptionViolated",
    "CollinearOverlap",
    "CurvesTooClose",
    "DegenerateInput",
    "DegeneratePair",
    "EmptyResult",
    "FavardLabError",
    "FavardReport",
    "InsufficientBuckets",
    "IntervalUnion",
    "ParseError",
    "Polyline",
    "QuadratureConfig",
    "QuadratureNotConverged",
    "Segment",
    "SegmentSet",
    "StageError",
    "Tube",
    "ValidationError",
    "WitnessFailed",
    "crofton_integral",
    "crofton_quadrature",
    "eta_measure_hitting",
    "favard_defect",
    "favard_length",
    "favard_report",
    "projection_measure",
    "besicovitch_alternative",
    "conical_mass",
    "high_density_points",
    "max_conical_density",
    "cone_condition_check",
    "cover_by_single_graph",
    "two_cones_extract",
    "energy_I1",
    "generate_grid_set",
    "lipschitz_intersection_mass",
    "CurveWithTangents",
    "monte_carlo_pair_measure",
    "pair_line_measure_formula",
    "pair_line_measure_oracle",
    "load_scene",
    "parse_scene",
    "analyze",
    "build_witness",
    "case_split",
    "defect_certificate",
    "minigraph_decompose",
]
