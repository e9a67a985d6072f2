"""World model: convex workspace, convex obstacles, disc robot of radius rho.

The collision distance of a set is its distance to the boundary of the free
space, i.e. the smallest gap to a wall or obstacle minus the robot radius,
clipped at zero for sets that leave the free space or touch its boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, NumericError
from .geometry import (
    GJK_MAX_ITER,
    GJK_REL_TOL,
    ConvexBody,
    Polytope,
    _free_gap,
    edge_normals,
    point,
)


@dataclass(frozen=True, eq=False)
class Environment:
    workspace: Polytope
    obstacles: tuple[ConvexBody, ...]
    robot_radius: float
    clearance: float
    _packed: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if not self.robot_radius > 0.0:
            raise DomainError("robot radius must be positive")
        if not self.clearance > 0.0:
            raise DomainError("clearance must be positive")
        obstacles = tuple(self.obstacles)
        d = self.workspace.dim
        for ob in obstacles:
            if ob.dim != d:
                raise DomainError("obstacle dimension differs from workspace dimension")
        object.__setattr__(self, "obstacles", obstacles)
        N, offsets = edge_normals(self.workspace)
        packs = [ob._packed for ob in obstacles]
        balls = [ob.bounding_ball() for ob in obstacles]
        ptr = np.cumsum([0] + [p[1].shape[0] for p in packs]).astype(np.int64)
        packed = (
            N,
            offsets,
            np.array([p[0] for p in packs], dtype=np.int64),
            ptr,
            np.concatenate([p[1] for p in packs]) if packs else np.zeros((0, d)),
            np.array([p[2] for p in packs]).reshape(-1, d, d),
            np.array([p[3] for p in packs], dtype=float),
            np.array([b[0] for b in balls], dtype=float).reshape(-1, d),
            np.array([b[1] for b in balls], dtype=float),
        )
        object.__setattr__(self, "_packed", packed)

    @property
    def dim(self) -> int:
        return self.workspace.dim


def set_free_distance(env: Environment, body: ConvexBody, ball=None) -> float:
    """Distance of a convex set to the free-space boundary; 0 if not strictly inside.

    ``ball`` optionally supplies a known bounding ball (center, radius) of the
    body, used only to prune obstacle queries.
    """
    if body.dim != env.dim:
        raise DomainError(f"body dimension {body.dim} does not match environment {env.dim}")
    c, R = body.bounding_ball() if ball is None else ball
    gap, ok = _free_gap(
        *body._packed, np.asarray(c, dtype=float), float(R), *env._packed,
        env.robot_radius, GJK_MAX_ITER, GJK_REL_TOL,
    )
    if not ok:
        raise NumericError(f"GJK did not converge within {GJK_MAX_ITER} iterations")
    return max(0.0, gap - env.robot_radius)


def point_free_distance(env: Environment, p) -> float:
    body = point(p)
    return set_free_distance(env, body, (body.vertices[0], 0.0))


def in_clearance(env: Environment, p, margin: float) -> bool:
    """True iff ``p`` keeps at least ``margin`` from the free-space boundary."""
    if margin < 0.0:
        raise DomainError("margin must be nonnegative")
    return point_free_distance(env, p) >= margin


def make_environment(
    workspace: Sequence[Sequence[float]],
    obstacles: Sequence[ConvexBody],
    robot_radius: float,
    clearance: float,
) -> Environment:
    return Environment(Polytope(workspace), tuple(obstacles), robot_radius, clearance)
