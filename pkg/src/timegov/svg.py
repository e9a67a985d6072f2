"""Static SVG rendering of a scene and a simulated run.

Output is a pure function of its inputs (fixed number formatting, no
timestamps), so identical runs give byte-identical files.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .environment import Environment
from .geometry import Disc, Ellipsoid, Polytope
from .refpath import ReferencePath
from .simulator import SimLog

PX_PER_M = 60.0
MARGIN_PX = 20.0


def _fmt(v: float) -> str:
    return f"{v:.2f}"


class _Canvas:
    def __init__(self, lo: np.ndarray, hi: np.ndarray):
        self.lo, self.hi = lo, hi
        self.width = (hi[0] - lo[0]) * PX_PER_M + 2 * MARGIN_PX
        self.height = (hi[1] - lo[1]) * PX_PER_M + 2 * MARGIN_PX
        self.items: list[str] = []

    def xy(self, p) -> tuple[float, float]:
        # SVG y axis points down
        return (MARGIN_PX + (p[0] - self.lo[0]) * PX_PER_M,
                MARGIN_PX + (self.hi[1] - p[1]) * PX_PER_M)

    def polygon(self, pts, **style):
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (self.xy(p) for p in pts))
        self.items.append(f'<polygon points="{coords}"{_style(style)}/>')

    def polyline(self, pts, **style):
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in (self.xy(p) for p in pts))
        self.items.append(f'<polyline points="{coords}" fill="none"{_style(style)}/>')

    def circle(self, c, r: float, **style):
        x, y = self.xy(c)
        self.items.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(r * PX_PER_M)}"{_style(style)}/>'
        )

    def line(self, p, q, **style):
        (x1, y1), (x2, y2) = self.xy(p), self.xy(q)
        self.items.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}"{_style(style)}/>'
        )

    def render(self) -> str:
        head = (
            '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{_fmt(self.width)}" height="{_fmt(self.height)}" '
            f'viewBox="0 0 {_fmt(self.width)} {_fmt(self.height)}">'
        )
        return "\n".join([head, *self.items, "</svg>"]) + "\n"


def _style(style: dict) -> str:
    return "".join(f' {k.replace("_", "-")}="{v}"' for k, v in style.items())


def _convex_outline(body) -> np.ndarray:
    if isinstance(body, Polytope):
        V = body.vertices
        if V.shape[0] < 3:
            return V
        c = V.mean(axis=0)
        order = np.argsort(np.arctan2(V[:, 1] - c[1], V[:, 0] - c[0]))
        return V[order]
    th = np.linspace(0.0, 2.0 * np.pi, 73)[:-1]
    U = np.column_stack([np.cos(th), np.sin(th)])
    return np.array([body.support(u) for u in U])


def render_scene(
    env: Environment,
    path: ReferencePath,
    log: Optional[SimLog] = None,
    bar_interval: float = 0.5,
    bar_scale: float = 0.25,
) -> str:
    """SVG of workspace, obstacles, reference path (red) and robot trajectory (blue).

    Velocity bars are drawn every ``bar_interval`` seconds, perpendicular to the
    motion, with length ``bar_scale`` meters per m/s of speed.
    """
    if env.dim != 2:
        raise ValueError("only planar scenes can be rendered")
    W = env.workspace.vertices
    cv = _Canvas(W.min(axis=0), W.max(axis=0))
    cv.polygon(W, fill="#ffffff", stroke="#000000", stroke_width="2")
    for ob in env.obstacles:
        if isinstance(ob, Disc):
            cv.circle(ob.center, ob.radius, fill="#808080", stroke="none")
        elif isinstance(ob, (Polytope, Ellipsoid)):
            cv.polygon(_convex_outline(ob), fill="#808080", stroke="none")
    cv.polyline(path.waypoints, stroke="#d62728", stroke_width="2")
    cv.circle(path.waypoints[-1], env.robot_radius, fill="#d62728", fill_opacity="0.5", stroke="#d62728")
    if log is not None and log.data.shape[0] > 0:
        pos = log.positions
        stride = max(1, pos.shape[0] // 4000)
        cv.polyline(pos[::stride], stroke="#1f77b4", stroke_width="1.5")
        if log.order >= 2:
            dt = float(log.t[1] - log.t[0]) if log.t.shape[0] > 1 else 1.0
            every = max(1, int(round(bar_interval / dt)))
            vel = log.states[:, 1, :]
            for i in range(0, pos.shape[0], every):
                v = vel[i]
                speed = float(np.linalg.norm(v))
                if speed < 1e-9:
                    continue
                nrm = np.array([-v[1], v[0]]) / speed
                half = 0.5 * bar_scale * speed
                cv.line(pos[i] - half * nrm, pos[i] + half * nrm, stroke="#1f77b4", stroke_width="1")
        cv.circle(pos[0], env.robot_radius, fill="#1f77b4", fill_opacity="0.5", stroke="#1f77b4")
    return cv.render()
