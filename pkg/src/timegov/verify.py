"""Independent oracles for the test suite and the ``verify`` command.

These checks avoid the code paths they test. Frozen-parameter trajectories
are propagated with the exact matrix exponential rather than the RK4
simulator. Set membership uses sampled support directions rather than
body-specific formulas. Distances are checked against dense boundary
sampling rather than GJK.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm
from scipy.spatial import ConvexHull, cKDTree

from .errors import DomainError, NumericError
from .geometry import ConvexBody, Disc, Ellipsoid, Polytope, gjk_distance, sphere_directions, sym_sqrt
from .phd import PhdGains, companion, gains_from_roots
from .prediction import (
    LyapunovPredictor,
    MotionPredictor,
    VandermondePredictor,
    lyap_norm,
    make_predictor,
    solve_lyapunov,
    vandermonde_radius,
)

N_DIRECTIONS = 256


@dataclass
class FrozenRun:
    """Closed-loop samples with a frozen path parameter (reference ``r``)."""

    t: np.ndarray
    states: np.ndarray  # (steps, n, d)
    r: np.ndarray


@dataclass
class ContainmentReport:
    trials: int
    worst_margin: float
    per_trial: list[tuple[float, float]] = field(default_factory=list)


def frozen_trajectory(gains: PhdGains, x0, r, horizon: float, dt: float) -> FrozenRun:
    """Exact samples of the PhD closed loop at fixed reference ``r``."""
    if not horizon > 0.0:
        raise DomainError("horizon must be positive")
    x0 = np.asarray(x0, dtype=float)
    r = np.asarray(r, dtype=float)
    n = gains.order
    steps = int(np.ceil(horizon / dt))
    Phi = expm(companion(gains) * dt)
    e = x0.copy()
    e[0] -= r
    out = np.empty((steps + 1, n, x0.shape[1]))
    out[0] = e
    for k in range(steps):
        e = Phi @ e
        out[k + 1] = e
    if not np.all(np.isfinite(out)):
        raise NumericError("frozen trajectory diverged")
    out[:, 0, :] += r
    return FrozenRun(np.arange(steps + 1) * dt, out, r)


def point_margin(body: ConvexBody, q, directions: np.ndarray) -> float:
    """min_u h(u) - <q, u> over the sampled unit directions (>= 0 when q is inside)."""
    q = np.asarray(q, dtype=float)
    return float(np.min(body.support_values(directions) - directions @ q))


def containment_trial(predictor: MotionPredictor, gains: PhdGains, x0, r,
                      horizon: float, dt: float) -> tuple[float, float]:
    """(time, margin) of the worst containment margin along one frozen run."""
    x0 = np.asarray(x0, dtype=float)
    run = frozen_trajectory(gains, x0, r, horizon, dt)
    body = predictor.body(x0, np.asarray(r, dtype=float))
    U = sphere_directions(x0.shape[1], N_DIRECTIONS)
    h = body.support_values(U)
    margins = (h[None, :] - run.states[:, 0, :] @ U.T).min(axis=1)
    k = int(np.argmin(margins))
    return float(run.t[k]), float(margins[k])


def random_state(rng: np.random.Generator, n: int, d: int, r=None, spread: float = 2.0) -> np.ndarray:
    x = rng.normal(scale=spread, size=(n, d))
    if r is not None:
        x[0] += r
    return x


def containment_report(kind: str, n: int, d: int, trials: int, rng: np.random.Generator,
                       roots=None, dt: float = 0.01) -> ContainmentReport:
    roots = [-3.0] * n if roots is None else list(roots)
    gains = gains_from_roots(roots)
    predictor = make_predictor(kind, roots)
    horizon = 20.0 / abs(max(roots))
    rep = ContainmentReport(trials, np.inf)
    for _ in range(trials):
        r = rng.uniform(-2.0, 2.0, size=d)
        x0 = random_state(rng, n, d, r)
        t, m = containment_trial(predictor, gains, x0, r, horizon, dt)
        rep.per_trial.append((t, m))
        rep.worst_margin = min(rep.worst_margin, m)
    return rep


def lyapunov_residual(A, P) -> float:
    """Spectral norm of A^T P + P A + I."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    P = np.atleast_2d(np.asarray(P, dtype=float))
    if A.shape != P.shape or A.shape[0] != A.shape[1]:
        raise DomainError("A and P must be square and of equal size")
    return float(np.linalg.norm(A.T @ P + P @ A + np.eye(A.shape[0]), 2))


def radius_decay_check(run: FrozenRun, predictor: MotionPredictor) -> float:
    """Lyapunov: largest per-step increase of the P-norm. Vandermonde: final radius."""
    if isinstance(predictor, LyapunovPredictor):
        norms = np.array([lyap_norm(predictor.cert, x, run.r) for x in run.states])
        if norms.size < 2:
            return 0.0
        return float(np.max(np.diff(norms)))
    if isinstance(predictor, VandermondePredictor):
        return vandermonde_radius(predictor.reduced, run.states[-1], run.r)
    raise DomainError(f"unknown predictor {predictor!r}")


# ---------------------------------------------------------------- distances


def boundary_samples(body: ConvexBody, delta: float) -> np.ndarray:
    """Planar boundary points with spacing at most ``delta``."""
    if body.dim != 2:
        raise DomainError("boundary sampling is implemented for planar bodies")
    if isinstance(body, Disc):
        k = max(8, int(np.ceil(2 * np.pi * body.radius / delta)))
        th = 2 * np.pi * np.arange(k) / k
        return body.center + body.radius * np.column_stack([np.cos(th), np.sin(th)])
    if isinstance(body, Ellipsoid):
        R = body.scale * sym_sqrt(body.shape)
        perim = 2 * np.pi * np.linalg.norm(R, 2)
        k = max(8, int(np.ceil(perim / delta)))
        th = 2 * np.pi * np.arange(k) / k
        return body.center + np.column_stack([np.cos(th), np.sin(th)]) @ R.T
    V = np.unique(body.vertices, axis=0)
    if V.shape[0] >= 3:
        try:
            V = V[ConvexHull(V).vertices]
        except Exception:  # collinear points: fall through to segment sampling
            pass
    if V.shape[0] == 1:
        return V
    pts = []
    ring = np.vstack([V, V[:1]]) if V.shape[0] >= 3 else V
    for a, b in zip(ring[:-1], ring[1:]):
        k = max(1, int(np.ceil(np.linalg.norm(b - a) / delta)))
        s = np.arange(k + 1)[:, None] / k
        pts.append(a + s * (b - a))
    return np.vstack(pts)


def _inside(body: ConvexBody, Q: np.ndarray) -> np.ndarray:
    U = sphere_directions(2, 720)
    return np.all(Q @ U.T <= body.support_values(U)[None, :] + 1e-12, axis=1)


def brute_force_distance(A: ConvexBody, B: ConvexBody, delta: float) -> float:
    """Min distance between densely sampled boundaries; 0 when one set reaches into the other."""
    SA, SB = boundary_samples(A, delta), boundary_samples(B, delta)
    if np.any(_inside(B, SA)) or np.any(_inside(A, SB)):
        return 0.0
    dist, _ = cKDTree(SB).query(SA)
    return float(dist.min())


def random_convex_body(rng: np.random.Generator, center_box: float = 4.0) -> ConvexBody:
    c = rng.uniform(-center_box, center_box, size=2)
    kind = rng.integers(3)
    if kind == 0:
        return Disc(c, rng.uniform(0.1, 1.5))
    if kind == 1:
        M = rng.normal(size=(2, 2))
        return Ellipsoid(c, M @ M.T + 0.05 * np.eye(2), rng.uniform(0.2, 1.2))
    k = rng.integers(1, 8)
    return Polytope(c + rng.uniform(-1.5, 1.5, size=(k, 2)))


def gjk_oracle_check(pairs: int, rng: np.random.Generator, delta: float = 1e-3) -> float:
    """Largest |GJK - brute force| over random convex pairs."""
    worst = 0.0
    for _ in range(pairs):
        A, B = random_convex_body(rng), random_convex_body(rng)
        worst = max(worst, abs(gjk_distance(A, B) - brute_force_distance(A, B, delta)))
    return worst


# ---------------------------------------------------------------- batch


def run_all(trials: int = 200, seed: int = 0) -> list[tuple[str, bool, str]]:
    """Run every oracle; returns (name, passed, detail) triples."""
    rng = np.random.default_rng(seed)
    results = []

    worst_res = 0.0
    for n in range(1, 6):
        for roots in ([-3.0] * n, list(-rng.uniform(0.5, 5.0, size=n))):
            A = companion(gains_from_roots(roots))
            worst_res = max(worst_res, lyapunov_residual(A, solve_lyapunov(A).P_small))
    results.append(("lyapunov_residual", worst_res <= 1e-10, f"max residual {worst_res:.3g}"))

    for kind in ("lyapunov", "vandermonde"):
        for n in (2, 3):
            rep = containment_report(kind, n, 2, trials, rng)
            results.append((f"containment_{kind}_n{n}", rep.worst_margin >= -1e-6,
                            f"worst margin {rep.worst_margin:.3g} over {rep.trials} trials"))

    for kind in ("lyapunov", "vandermonde"):
        for n in (2, 3):
            roots = [-3.0] * n
            gains = gains_from_roots(roots)
            pred = make_predictor(kind, roots)
            worst = -np.inf
            for _ in range(max(1, trials // 10)):
                r = rng.uniform(-2.0, 2.0, size=2)
                run = frozen_trajectory(gains, random_state(rng, n, 2, r), r, 20.0 / 3.0, 0.01)
                worst = max(worst, radius_decay_check(run, pred))
            bound = 1e-9 if kind == "lyapunov" else 1e-3
            label = "max step increase" if kind == "lyapunov" else "max final radius"
            results.append((f"radius_decay_{kind}_n{n}", worst <= bound, f"{label} {worst:.3g}"))

    err = gjk_oracle_check(max(10, trials // 2), rng)
    results.append(("gjk_vs_brute_force", err <= 1e-3, f"max discrepancy {err:.3g}"))
    return results
