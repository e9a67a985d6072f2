"""Path-parameter rate laws: the safety-driven time governor and a tanh heuristic."""

from __future__ import annotations

from dataclasses import dataclass
from math import tanh

from .environment import Environment, set_free_distance
from .errors import DomainError
from .prediction import MotionPredictor, predict
from .refpath import ReferencePath


@dataclass(frozen=True)
class GovernorParams:
    kappa_sigma: float = 3.0
    kappa_s: float = 1.0

    def __post_init__(self):
        if not (self.kappa_sigma > 0.0 and self.kappa_s > 0.0):
            raise DomainError("governor gains must be strictly positive")


@dataclass(frozen=True)
class HeuristicParams:
    sdot_desired: float = 1.0
    eta: float = 1.0
    kappa_s: float = 1.0

    def __post_init__(self):
        if not self.sdot_desired > 0.0:
            raise DomainError("sdot_desired must be positive")
        if not 0.0 <= self.eta <= 1.0:
            raise DomainError("eta must lie in [0, 1]")
        if not self.kappa_s > 0.0:
            raise DomainError("kappa_s must be positive")


def safety_level(env: Environment, predictor: MotionPredictor, x, s: float, path: ReferencePath) -> float:
    """Collision distance of the motion predicted for a frozen path parameter."""
    return set_free_distance(env, predict(predictor, x, s, path))


def safe_rate(params: GovernorParams, sigma: float, s: float, s_max: float) -> float:
    """min(kappa_sigma * sigma, kappa_s * (s_max - s)).

    Positive exactly when the predicted motion is strictly safe and the path
    end has not been reached.
    """
    if s > s_max:
        raise DomainError(f"path parameter {s} exceeds the path end {s_max}")
    if sigma < 0.0:
        raise DomainError("safety level must be nonnegative")
    return min(params.kappa_sigma * sigma, params.kappa_s * (s_max - s))


def heuristic_rate(params: HeuristicParams, path_error: float, s: float, s_max: float) -> float:
    """Error-saturated constant speed, capped so that s stops at the path end."""
    g = params.sdot_desired * (1.0 - params.eta * tanh(path_error))
    return max(0.0, min(g, params.kappa_s * (s_max - s)))
