"""Arc-length parametrized polyline reference paths."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .environment import Environment, point_free_distance
from .errors import DomainError


@dataclass(frozen=True, eq=False)
class ReferencePath:
    waypoints: np.ndarray
    cumulative_lengths: np.ndarray

    @property
    def a(self) -> float:
        return 0.0

    @property
    def b(self) -> float:
        return float(self.cumulative_lengths[-1])

    @property
    def length(self) -> float:
        return self.b

    def _segment(self, s: float) -> int:
        # right-continuous: a knot belongs to the segment it starts
        i = int(np.searchsorted(self.cumulative_lengths, s, side="right")) - 1
        return min(max(i, 0), len(self.waypoints) - 2)

    def eval(self, s: float) -> np.ndarray:
        """Point at arc length ``s`` (clamped to [a, b])."""
        if s <= 0.0:
            return self.waypoints[0].copy()
        if s >= self.b:
            return self.waypoints[-1].copy()
        i = self._segment(s)
        s0, s1 = self.cumulative_lengths[i], self.cumulative_lengths[i + 1]
        t = (s - s0) / (s1 - s0)
        return (1.0 - t) * self.waypoints[i] + t * self.waypoints[i + 1]

    def tangent(self, s: float) -> np.ndarray:
        i = self._segment(min(max(s, 0.0), self.b))
        seg = self.waypoints[i + 1] - self.waypoints[i]
        return seg / np.linalg.norm(seg)


def build_path(waypoints: Sequence[Sequence[float]]) -> ReferencePath:
    W = np.array(waypoints, dtype=float)
    if W.ndim != 2 or W.shape[0] < 2:
        raise DomainError("a path needs at least 2 waypoints")
    if not np.all(np.isfinite(W)):
        raise DomainError("waypoints must be finite")
    seg = np.linalg.norm(np.diff(W, axis=0), axis=1)
    if np.any(seg <= 0.0):
        k = int(np.argmin(seg))
        raise DomainError(f"zero-length segment between waypoints {k} and {k + 1}")
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    W.setflags(write=False)
    cum.setflags(write=False)
    return ReferencePath(W, cum)


def sample_parameters(path: ReferencePath, step: float) -> np.ndarray:
    """Grid over [a, b] with spacing <= step that includes every knot."""
    if not step > 0.0:
        raise DomainError("sample step must be positive")
    out = []
    cum = path.cumulative_lengths
    for s0, s1 in zip(cum[:-1], cum[1:]):
        k = max(1, int(np.ceil((s1 - s0) / step)))
        out.append(np.linspace(s0, s1, k + 1)[:-1])
    out.append([cum[-1]])
    return np.concatenate(out)


def validate_clearance(
    env: Environment, path: ReferencePath, margin: float, sample_step: float | None = None
) -> list[tuple[float, float]]:
    """Sampled (s, d_F) pairs where the path comes closer than ``margin`` to collision.

    An empty list means the path passed. The default step is min(rho, eps)/4.
    """
    if sample_step is None:
        sample_step = min(env.robot_radius, env.clearance) / 4.0
    violations = []
    for s in sample_parameters(path, sample_step):
        dist = point_free_distance(env, path.eval(s))
        if dist < margin:
            violations.append((float(s), dist))
    return violations
