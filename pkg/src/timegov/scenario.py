"""Scenario documents: JSON schema, validation, canonical serialization.

A scenario is a JSON object with a ``"schema"`` field equal to
``SCHEMA_VERSION``. Units are meters and seconds. Example::

    {
      "schema": "timegov.scenario/1",
      "name": "corridor",
      "environment": {
        "workspace": [[0, 0], [10, 0], [10, 8], [0, 8]],
        "obstacles": [
          {"type": "polygon", "vertices": [[2, 2], [8, 2], [8, 6], [2, 6]]},
          {"type": "disc", "center": [5, 7], "radius": 0.2}
        ],
        "robot_radius": 0.3,
        "clearance": 0.5
      },
      "path": [[1, 1.5], [1, 7], [9, 7]],
      "order": 2,
      "roots": [-3, -3],
      "governor": {"type": "safe", "kappa_sigma": 3.0, "kappa_s": 1.0},
      "predictor": "vandermonde",
      "velocity_feedback": false,
      "sim": {"dt": 0.001, "t_max": 120, "s_tol": 0.001, "pos_tol": 0.01}
    }

Omitted optional fields take defaults: roots (-3, ..., -3), governor gains
3.0 / 1.0, heuristic speed 1.0 and eta 1.0, the simulation settings above,
and an initial state resting at the start of the path.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .environment import Environment
from .errors import DomainError, ScenarioError, SetupError
from .geometry import Disc, Polytope
from .governor import GovernorParams, HeuristicParams
from .phd import gains_from_roots
from .prediction import make_predictor
from .refpath import build_path, validate_clearance
from .simulator import Problem, SimConfig, check_initial_condition, default_initial_state

SCHEMA_VERSION = "timegov.scenario/1"
BUILTIN = ("corridor", "office")

Points = tuple[tuple[float, ...], ...]


@dataclass(frozen=True)
class Obstacle:
    type: str
    vertices: Optional[Points] = None
    center: Optional[tuple[float, ...]] = None
    radius: Optional[float] = None

    def to_body(self):
        if self.type == "polygon":
            return Polytope(self.vertices)
        return Disc(self.center, self.radius)

    def to_dict(self) -> dict:
        if self.type == "polygon":
            return {"type": "polygon", "vertices": [list(v) for v in self.vertices]}
        return {"type": "disc", "center": list(self.center), "radius": self.radius}


@dataclass(frozen=True)
class GovernorSpec:
    type: str = "safe"
    kappa_sigma: float = 3.0
    kappa_s: float = 1.0
    sdot_desired: float = 1.0
    eta: float = 1.0

    def params(self):
        if self.type == "safe":
            return GovernorParams(self.kappa_sigma, self.kappa_s)
        return HeuristicParams(self.sdot_desired, self.eta, self.kappa_s)


@dataclass(frozen=True)
class Scenario:
    name: str
    workspace: Points
    obstacles: tuple[Obstacle, ...]
    robot_radius: float
    clearance: float
    path: Points
    order: int
    roots: tuple[float, ...]
    governor: GovernorSpec = field(default_factory=GovernorSpec)
    predictor: str = "vandermonde"
    velocity_feedback: bool = False
    sim: SimConfig = field(default_factory=SimConfig)
    initial_state: Optional[Points] = None

    def environment(self) -> Environment:
        return Environment(
            Polytope(self.workspace),
            tuple(o.to_body() for o in self.obstacles),
            self.robot_radius,
            self.clearance,
        )

    def variant(self, *, order: int | None = None, predictor: str | None = None,
                velocity_feedback: bool | None = None, dt: float | None = None) -> "Scenario":
        """Copy with some experiment settings changed; roots follow the order."""
        out = self
        if order is not None and order != self.order:
            root = max(self.roots)
            out = replace(out, order=order, roots=(root,) * order, initial_state=None)
        if predictor is not None:
            out = replace(out, predictor=predictor)
        if velocity_feedback is not None:
            out = replace(out, velocity_feedback=velocity_feedback)
        if dt is not None:
            out = replace(out, sim=replace(out.sim, dt=dt))
        return out

    def compile(self, check: bool = True) -> Problem:
        """Build the simulation problem; with ``check`` also run the safety prechecks."""
        env = self.environment()
        path = build_path(self.path)
        gains = gains_from_roots(self.roots)
        predictor = make_predictor(self.predictor, self.roots)
        x0 = (np.array(self.initial_state, dtype=float) if self.initial_state is not None
              else default_initial_state(path, self.order))
        problem = Problem(env, path, gains, predictor, self.governor.params(),
                          self.velocity_feedback, self.sim, x0, 0.0)
        if check:
            bad = validate_clearance(env, path, self.clearance)
            if bad:
                listed = ", ".join(f"s={s:.3f} (d={d:.3f})" for s, d in bad[:8])
                more = f" and {len(bad) - 8} more" if len(bad) > 8 else ""
                raise ScenarioError(
                    f"path: reference path violates the {self.clearance} m clearance at "
                    f"{listed}{more}"
                )
            check_initial_condition(problem)
        return problem

    def to_dict(self) -> dict:
        doc: dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "name": self.name,
            "environment": {
                "workspace": [list(v) for v in self.workspace],
                "obstacles": [o.to_dict() for o in self.obstacles],
                "robot_radius": self.robot_radius,
                "clearance": self.clearance,
            },
            "path": [list(v) for v in self.path],
            "order": self.order,
            "roots": list(self.roots),
            "governor": {
                "type": self.governor.type,
                "kappa_sigma": self.governor.kappa_sigma,
                "kappa_s": self.governor.kappa_s,
                "sdot_desired": self.governor.sdot_desired,
                "eta": self.governor.eta,
            },
            "predictor": self.predictor,
            "velocity_feedback": self.velocity_feedback,
            "sim": {
                "dt": self.sim.dt,
                "t_max": self.sim.t_max,
                "s_tol": self.sim.s_tol,
                "pos_tol": self.sim.pos_tol,
            },
        }
        if self.initial_state is not None:
            doc["initial_state"] = [list(v) for v in self.initial_state]
        return doc


def dumps(scenario: Scenario) -> str:
    return json.dumps(scenario.to_dict(), indent=2) + "\n"


def write_scenario(scenario: Scenario, path) -> None:
    Path(path).write_text(dumps(scenario))


class _Reader:
    """Field access with error messages that name the field and its source line."""

    def __init__(self, text: str, source: str):
        self.lines = text.splitlines()
        self.source = source

    def line_of(self, where: str) -> int | None:
        keys = [k for k in re.split(r"[.\[\]]", where) if k and not k.isdigit()]
        line = 0
        for key in keys:
            pat = f'"{key}"'
            for i in range(line, len(self.lines)):
                if pat in self.lines[i]:
                    line = i
                    break
            else:
                return None
        return line + 1 if keys else None

    def fail(self, where: str, msg: str):
        ln = self.line_of(where)
        loc = f"{self.source}:{ln}" if ln else self.source
        raise ScenarioError(f"{loc}: {where}: {msg}")

    def get(self, obj: dict, key: str, where: str, default=...):
        if key not in obj:
            if default is ...:
                self.fail(f"{where}.{key}" if where else key, "required field is missing")
            return default
        return obj[key]

    def number(self, value, where: str, positive=False, nonneg=False) -> float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(where, f"expected a number, got {type(value).__name__}")
        v = float(value)
        if not np.isfinite(v):
            self.fail(where, "must be finite")
        if positive and not v > 0.0:
            self.fail(where, "must be > 0")
        if nonneg and not v >= 0.0:
            self.fail(where, "must be >= 0")
        return v

    def points(self, value, where: str, dim: int | None = None, min_count: int = 1) -> Points:
        if not isinstance(value, list) or len(value) < min_count:
            self.fail(where, f"expected a list of at least {min_count} points")
        out = []
        for i, p in enumerate(value):
            if not isinstance(p, list) or not p:
                self.fail(f"{where}[{i}]", "expected a coordinate list")
            out.append(tuple(self.number(c, f"{where}[{i}]") for c in p))
        dims = {len(p) for p in out}
        if len(dims) != 1 or (dim is not None and dims != {dim}):
            self.fail(where, f"all points must have dimension {dim or 'equal'}")
        return tuple(out)


def _check_workspace(rd: _Reader, ws: Points) -> None:
    V = np.array(ws)
    if V.shape[1] != 2 or V.shape[0] < 3:
        rd.fail("environment.workspace", "must be a planar polygon with at least 3 vertices")
    E = np.roll(V, -1, axis=0) - V
    cross = E[:, 0] * np.roll(E[:, 1], -1) - E[:, 1] * np.roll(E[:, 0], -1)
    if np.any(cross < -1e-12):
        rd.fail("environment.workspace", "must be convex and listed counterclockwise")
    if cross.sum() <= 1e-12:
        rd.fail("environment.workspace", "must have positive area")


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    """Parse and validate a scenario document (without the simulation prechecks)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{source}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
    rd = _Reader(text, source)
    if not isinstance(doc, dict):
        raise ScenarioError(f"{source}: top level must be a JSON object")
    schema = rd.get(doc, "schema", "")
    if schema != SCHEMA_VERSION:
        rd.fail("schema", f"unsupported schema {schema!r} (expected {SCHEMA_VERSION!r})")
    name = str(doc.get("name", Path(source).stem))

    env = rd.get(doc, "environment", "")
    if not isinstance(env, dict):
        rd.fail("environment", "expected an object")
    workspace = rd.points(rd.get(env, "workspace", "environment"), "environment.workspace", 2, 3)
    _check_workspace(rd, workspace)
    obstacles = []
    for i, ob in enumerate(rd.get(env, "obstacles", "environment", [])):
        where = f"environment.obstacles[{i}]"
        if not isinstance(ob, dict):
            rd.fail(where, "expected an object")
        kind = ob.get("type")
        if kind == "polygon":
            obstacles.append(Obstacle("polygon", vertices=rd.points(
                rd.get(ob, "vertices", where), f"{where}.vertices", 2)))
        elif kind == "disc":
            center = rd.points([rd.get(ob, "center", where)], f"{where}.center", 2)[0]
            radius = rd.number(rd.get(ob, "radius", where), f"{where}.radius", nonneg=True)
            obstacles.append(Obstacle("disc", center=center, radius=radius))
        else:
            rd.fail(f"{where}.type", f"must be 'polygon' or 'disc', got {kind!r}")
    rho = rd.number(rd.get(env, "robot_radius", "environment"), "environment.robot_radius", positive=True)
    eps = rd.number(rd.get(env, "clearance", "environment"), "environment.clearance", positive=True)

    path = rd.points(rd.get(doc, "path", ""), "path", 2, 2)
    for i in range(len(path) - 1):
        if path[i] == path[i + 1]:
            rd.fail("path", f"waypoints {i} and {i + 1} coincide (zero-length segment)")

    order = rd.get(doc, "order", "")
    if isinstance(order, bool) or not isinstance(order, int) or order < 1:
        rd.fail("order", "must be an integer >= 1")
    roots_raw = rd.get(doc, "roots", "", None)
    if roots_raw is None:
        roots = (-3.0,) * order
    else:
        if not isinstance(roots_raw, list):
            rd.fail("roots", "expected a list of numbers")
        roots = tuple(rd.number(r, f"roots[{i}]") for i, r in enumerate(roots_raw))
        if len(roots) != order:
            rd.fail("roots", f"expected {order} roots for order {order}, got {len(roots)}")
        if any(not r < 0.0 for r in roots):
            rd.fail("roots", "roots must be strictly negative")

    gov = rd.get(doc, "governor", "", {})
    if not isinstance(gov, dict):
        rd.fail("governor", "expected an object")
    gtype = gov.get("type", "safe")
    if gtype not in ("safe", "heuristic"):
        rd.fail("governor.type", f"must be 'safe' or 'heuristic', got {gtype!r}")
    governor = GovernorSpec(
        gtype,
        rd.number(gov.get("kappa_sigma", 3.0), "governor.kappa_sigma", positive=True),
        rd.number(gov.get("kappa_s", 1.0), "governor.kappa_s", positive=True),
        rd.number(gov.get("sdot_desired", 1.0), "governor.sdot_desired", positive=True),
        rd.number(gov.get("eta", 1.0), "governor.eta", nonneg=True),
    )
    if governor.eta > 1.0:
        rd.fail("governor.eta", "must lie in [0, 1]")

    predictor = doc.get("predictor", "vandermonde")
    if predictor not in ("lyapunov", "vandermonde"):
        rd.fail("predictor", f"must be 'lyapunov' or 'vandermonde', got {predictor!r}")
    if predictor == "vandermonde" and order < 2:
        rd.fail("predictor", "the Vandermonde predictor needs order >= 2")
    vf = doc.get("velocity_feedback", False)
    if not isinstance(vf, bool):
        rd.fail("velocity_feedback", "expected true or false")

    sim_doc = rd.get(doc, "sim", "", {})
    if not isinstance(sim_doc, dict):
        rd.fail("sim", "expected an object")
    defaults = SimConfig()
    try:
        sim = SimConfig(**{
            k: rd.number(sim_doc.get(k, getattr(defaults, k)), f"sim.{k}", positive=True)
            for k in ("dt", "t_max", "s_tol", "pos_tol")
        })
    except DomainError as exc:
        rd.fail("sim", str(exc))

    initial = doc.get("initial_state")
    if initial is not None:
        initial = rd.points(initial, "initial_state", 2, order)
        if len(initial) != order:
            rd.fail("initial_state", f"expected {order} derivative rows, got {len(initial)}")

    return Scenario(name, workspace, tuple(obstacles), rho, eps, path, order, roots,
                    governor, predictor, vf, sim, initial)


def resolve(path_or_name) -> tuple[str, str]:
    """Return (text, source label) for a file path or a built-in scenario name."""
    p = Path(path_or_name)
    if p.exists():
        return p.read_text(), str(p)
    if str(path_or_name) in BUILTIN:
        name = f"{path_or_name}.json"
        return resources.files("timegov.scenarios").joinpath(name).read_text(), name
    raise FileNotFoundError(f"scenario file not found: {path_or_name}")


def load_scenario(path_or_name, check: bool = True) -> Scenario:
    """Load, validate and (with ``check``) run the path-clearance and initial-safety checks."""
    text, source = resolve(path_or_name)
    scenario = parse_scenario(text, source)
    if check:
        try:
            scenario.compile(check=True)
        except (DomainError, SetupError) as exc:
            raise ScenarioError(f"{source}: {exc}") from exc
    return scenario
