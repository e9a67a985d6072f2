"""Fixed-step RK4 simulation of the coupled robot and path-parameter dynamics."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Optional, Union

import numpy as np

from .environment import Environment, point_free_distance, set_free_distance
from .errors import DomainError, NumericError, SetupError
from .governor import GovernorParams, HeuristicParams, heuristic_rate, safe_rate
from .phd import PhdGains, phd_accel, reference_state
from .prediction import MotionPredictor
from .refpath import ReferencePath


@dataclass(frozen=True)
class SimConfig:
    dt: float = 1e-3
    t_max: float = 120.0
    s_tol: float = 1e-3
    pos_tol: float = 1e-2

    def __post_init__(self):
        if not (self.dt > 0.0 and self.t_max > 0.0):
            raise DomainError("dt and t_max must be positive")
        if self.dt > self.t_max:
            raise DomainError("dt must not exceed t_max")
        if not (self.s_tol > 0.0 and self.pos_tol > 0.0):
            raise DomainError("completion tolerances must be positive")


@dataclass(frozen=True, eq=False)
class Problem:
    """Everything one simulation run needs, already validated and compiled."""

    env: Environment
    path: ReferencePath
    gains: PhdGains
    predictor: MotionPredictor
    governor: Union[GovernorParams, HeuristicParams]
    velocity_feedback: bool
    sim: SimConfig
    x0: np.ndarray
    s0: float = 0.0

    @property
    def order(self) -> int:
        return self.gains.order

    @property
    def dim(self) -> int:
        return self.env.dim


def default_initial_state(path: ReferencePath, order: int) -> np.ndarray:
    return reference_state(path.eval(path.a), order)


def state_labels(order: int, dim: int) -> list[str]:
    axes = "xyz" if dim <= 3 else [str(i) for i in range(dim)]
    return [f"p{k}_{axes[j]}" for k in range(order) for j in range(dim)]


@dataclass
class SimLog:
    columns: list[str]
    data: np.ndarray
    order: int
    dim: int

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]

    @property
    def t(self) -> np.ndarray:
        return self.data[:, 0]

    @property
    def s(self) -> np.ndarray:
        return self.data[:, 1]

    @property
    def states(self) -> np.ndarray:
        """Array of shape (rows, order, dim)."""
        k = self.order * self.dim
        return self.data[:, 3 : 3 + k].reshape(-1, self.order, self.dim)

    @property
    def positions(self) -> np.ndarray:
        return self.states[:, 0, :]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(",".join(self.columns) + "\n")
            for row in self.data:
                fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


@dataclass
class Metrics:
    travel_time: Optional[float]
    min_clearance: float
    mean_path_error: float
    max_path_error: float
    completed: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)


def _governor_rate(problem: Problem, x: np.ndarray, s: float, r: np.ndarray):
    """(sdot, sigma, radius); sigma is NaN for the heuristic (not needed for the rate)."""
    body, radius = problem.predictor.evaluate(x, r)
    if isinstance(problem.governor, GovernorParams):
        sigma = set_free_distance(problem.env, body, (r, radius))
        return safe_rate(problem.governor, sigma, s, problem.path.b), sigma, radius
    err = float(np.linalg.norm(x[0] - r))
    return heuristic_rate(problem.governor, err, s, problem.path.b), math.nan, radius


def coupled_derivative(problem: Problem, x: np.ndarray, s: float):
    """Time derivatives (xdot, sdot) of the coupled system at (x, s).

    Also returns (sigma, radius) evaluated at the same point. Without velocity
    feedback the control uses sdot = 0, i.e. reference-position-only feedback.
    """
    s = min(max(s, problem.path.a), problem.path.b)
    r = problem.path.eval(s)
    sdot, sigma, radius = _governor_rate(problem, x, s, r)
    fb = sdot if problem.velocity_feedback else 0.0
    accel = phd_accel(problem.gains, x, r, problem.path.tangent(s), fb)
    xdot = np.empty_like(x)
    xdot[:-1] = x[1:]
    xdot[-1] = accel
    return xdot, sdot, sigma, radius


def _is_complete(problem: Problem, x: np.ndarray, s: float) -> bool:
    cfg = problem.sim
    if problem.path.b - s > cfg.s_tol:
        return False
    if np.linalg.norm(x[0] - problem.path.eval(problem.path.b)) > cfg.pos_tol:
        return False
    return bool(np.all(np.linalg.norm(x[1:], axis=1) <= cfg.pos_tol))


def check_initial_condition(problem: Problem) -> float:
    """Require the initial predicted motion to lie strictly inside free space."""
    x0 = np.asarray(problem.x0, dtype=float)
    if x0.shape != (problem.order, problem.dim):
        raise SetupError(f"initial state must have shape ({problem.order}, {problem.dim})")
    r = problem.path.eval(problem.s0)
    body = problem.predictor.body(x0, r)
    sigma = set_free_distance(problem.env, body)
    if not sigma > 0.0:
        raise SetupError(
            "initial motion prediction is not inside the free space "
            f"(safety level {sigma:.3g} at s={problem.s0})"
        )
    return sigma


def run(problem: Problem) -> tuple[SimLog, Metrics]:
    check_initial_condition(problem)
    cfg = problem.sim
    dt = cfg.dt
    a, b = problem.path.a, problem.path.b
    n, d = problem.order, problem.dim
    x = np.array(problem.x0, dtype=float)
    s = float(problem.s0)
    rows = []
    n_steps = int(math.floor(cfg.t_max / dt + 1e-9))
    step = 0
    while True:
        t = step * dt
        k1x, k1s, sigma, radius = coupled_derivative(problem, x, s)
        r = problem.path.eval(s)
        if math.isnan(sigma):
            sigma = set_free_distance(problem.env, problem.predictor.body(x, r))
        rows.append(
            (t, s, k1s, *x.ravel(), sigma, point_free_distance(problem.env, x[0]),
             radius, float(np.linalg.norm(x[0] - r)))
        )
        if _is_complete(problem, x, s) or step >= n_steps:
            break
        k2x, k2s, _, _ = coupled_derivative(problem, x + 0.5 * dt * k1x, s + 0.5 * dt * k1s)
        k3x, k3s, _, _ = coupled_derivative(problem, x + 0.5 * dt * k2x, s + 0.5 * dt * k2s)
        k4x, k4s, _, _ = coupled_derivative(problem, x + dt * k3x, s + dt * k3s)
        x = x + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        s = s + (dt / 6.0) * (k1s + 2.0 * k2s + 2.0 * k3s + k4s)
        s = min(max(s, a), b)
        if not np.all(np.isfinite(x)):
            raise NumericError(f"state diverged at t={t + dt:.6g}")
        step += 1
    columns = ["t", "s", "sdot", *state_labels(n, d), "sigma", "dF", "radius", "path_error"]
    log = SimLog(columns, np.array(rows, dtype=float), n, d)
    return log, compute_metrics(log, problem)


def compute_metrics(log: SimLog, problem: Problem) -> Metrics:
    """Travel time (first completed row), clearance and path-error summaries."""
    if log.data.shape[0] == 0:
        raise DomainError("cannot compute metrics of an empty log")
    cfg = problem.sim
    b = problem.path.b
    end = problem.path.eval(b)
    states = log.states
    ok = (b - log.s <= cfg.s_tol) & (np.linalg.norm(states[:, 0, :] - end, axis=1) <= cfg.pos_tol)
    if log.order > 1:
        ok &= np.all(np.linalg.norm(states[:, 1:, :], axis=2) <= cfg.pos_tol, axis=1)
    hits = np.flatnonzero(ok)
    err = log.column("path_error")
    completed = hits.size > 0
    return Metrics(
        travel_time=float(log.t[hits[0]]) if completed else None,
        min_clearance=float(log.column("dF").min()),
        mean_path_error=float(err.mean()),
        max_path_error=float(err.max()),
        completed=completed,
    )
