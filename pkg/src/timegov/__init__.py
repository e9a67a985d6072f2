"""Time governors for safe path following of high-order robots.

A reference point moves along a piecewise-linear path while a PhD
(proportional and higher-order derivative) controller tracks it. The rate of
the reference is throttled by the clearance of a feedback motion prediction
set, which keeps the robot inside free space.
"""

from .environment import Environment, make_environment, point_free_distance, set_free_distance
from .errors import DomainError, NumericError, ScenarioError, SetupError
from .geometry import Disc, Ellipsoid, Polytope, gjk_distance, point, support_point
from .governor import GovernorParams, HeuristicParams, heuristic_rate, safe_rate, safety_level
from .phd import PhdGains, companion, gains_from_roots, phd_accel, reduced_gains
from .prediction import (
    LyapunovCertificate,
    LyapunovPredictor,
    VandermondePredictor,
    make_predictor,
    predict,
    solve_lyapunov,
)
from .refpath import ReferencePath, build_path, validate_clearance
from .scenario import Scenario, dumps, load_scenario, parse_scenario, write_scenario
from .simulator import Metrics, Problem, SimConfig, SimLog, run
from .svg import render_scene

__version__ = "0.1.0"

__all__ = [
    "DomainError", "NumericError", "ScenarioError", "SetupError",
    "Disc", "Ellipsoid", "Polytope", "gjk_distance", "point", "support_point",
    "Environment", "make_environment", "point_free_distance", "set_free_distance",
    "ReferencePath", "build_path", "validate_clearance",
    "PhdGains", "companion", "gains_from_roots", "phd_accel", "reduced_gains",
    "LyapunovCertificate", "LyapunovPredictor", "VandermondePredictor",
    "make_predictor", "predict", "solve_lyapunov",
    "GovernorParams", "HeuristicParams", "heuristic_rate", "safe_rate", "safety_level",
    "Metrics", "Problem", "SimConfig", "SimLog", "run",
    "Scenario", "dumps", "load_scenario", "parse_scenario", "write_scenario",
    "render_scene",
]
