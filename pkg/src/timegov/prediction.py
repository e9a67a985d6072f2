"""Feedback motion prediction for PhD control with a frozen path parameter.

Two predictors are provided. The Lyapunov predictor projects a quadratic
Lyapunov level set onto position space; with the damping matrix fixed to the
identity the projection is a ball. The Vandermonde predictor is a simplex
spanned by the reference point and weighted partial sums of the state
derivatives. Both contain the whole future position trajectory of the
frozen-parameter closed loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Union

import numpy as np

from .errors import DomainError, NumericError
from .geometry import Ellipsoid, Polytope
from .phd import PhdGains, companion, gains_from_roots, reduced_gains
from .refpath import ReferencePath

LYAPUNOV_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class LyapunovCertificate:
    """Solution of A^T P + P A + I = 0 for the n x n companion matrix.

    The full nd x nd certificate is ``P_small kron I_d``; it is never formed.
    ``shape_scale`` is the (0, 0) entry of P_small^-1, so the projected shape
    matrix is ``shape_scale * I_d``.
    """

    P_small: np.ndarray
    shape_scale: float
    shape_norm: float
    residual: float

    @property
    def order(self) -> int:
        return self.P_small.shape[0]

    def shape(self, d: int) -> np.ndarray:
        return self.shape_scale * np.eye(d)


def solve_lyapunov(A) -> LyapunovCertificate:
    """Solve A^T P + P A + I = 0 over the n(n+1)/2 symmetric unknowns."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    n = A.shape[0]
    if A.shape != (n, n):
        raise DomainError("A must be square")
    pairs = list(combinations_with_replacement(range(n), 2))
    index = {}
    for k, (i, j) in enumerate(pairs):
        index[i, j] = index[j, i] = k
    m = len(pairs)
    M = np.zeros((m, m))
    rhs = np.zeros(m)
    for row, (i, j) in enumerate(pairs):
        # (A^T P)_ij + (P A)_ij = sum_k A_ki P_kj + sum_k P_ik A_kj
        for k in range(n):
            M[row, index[k, j]] += A[k, i]
            M[row, index[i, k]] += A[k, j]
        rhs[row] = -1.0 if i == j else 0.0
    try:
        sol = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"Lyapunov system is singular: {exc}") from exc
    P = np.empty((n, n))
    for (i, j), k in index.items():
        P[i, j] = sol[k]
    residual = float(np.linalg.norm(A.T @ P + P @ A + np.eye(n), 2))
    if not residual <= LYAPUNOV_RESIDUAL_TOL:
        raise NumericError(f"Lyapunov residual {residual:.3g} exceeds {LYAPUNOV_RESIDUAL_TOL}")
    if np.linalg.eigvalsh(P)[0] <= 0.0:
        raise NumericError("Lyapunov solution is not positive definite (A not Hurwitz?)")
    scale = float(np.linalg.inv(P)[0, 0])
    return LyapunovCertificate(P, scale, float(np.sqrt(scale)), residual)


def _error_state(x: np.ndarray, r) -> np.ndarray:
    e = np.array(x, dtype=float)
    r = np.asarray(r, dtype=float)
    if e.ndim != 2 or r.shape != (e.shape[1],):
        raise DomainError(f"state of shape {e.shape} does not match reference of shape {r.shape}")
    e[0] -= r
    return e


def lyap_norm(cert: LyapunovCertificate, x, r) -> float:
    """||x - (r, 0, ..., 0)|| in the norm induced by P_small kron I_d."""
    e = _error_state(x, r)
    if e.shape[0] != cert.order:
        raise DomainError(f"state order {e.shape[0]} does not match certificate order {cert.order}")
    q = float(np.sum(cert.P_small * (e @ e.T)))
    return float(np.sqrt(max(q, 0.0)))


def lyap_ellipsoid(cert: LyapunovCertificate, x, r) -> Ellipsoid:
    r = np.asarray(r, dtype=float)
    return Ellipsoid(r, cert.shape(r.shape[0]), lyap_norm(cert, x, r))


def lyap_radius(cert: LyapunovCertificate, x, r) -> float:
    return cert.shape_norm * lyap_norm(cert, x, r)


def vandermonde_vertices(reduced: PhdGains, x, r) -> np.ndarray:
    """Rows: r, then sum_{k<=m} (a_k / a_0) p^(k) for m = 0..n-1."""
    x = np.asarray(x, dtype=float)
    n = reduced.order + 1
    if x.ndim != 2 or x.shape[0] != n:
        raise DomainError(f"reduced gains of order {reduced.order} need a state of order {n}")
    a = np.asarray(reduced.coeffs)
    partial = np.cumsum((a / a[0])[:, None] * x, axis=0)
    return np.vstack([np.asarray(r, dtype=float)[None, :], partial])


def vandermonde_simplex(reduced: PhdGains, x, r) -> Polytope:
    return Polytope(vandermonde_vertices(reduced, x, r))


def vandermonde_radius(reduced: PhdGains, x, r) -> float:
    V = vandermonde_vertices(reduced, x, r)
    return float(np.sqrt(((V[1:] - V[0]) ** 2).sum(axis=1).max()))


@dataclass(frozen=True, eq=False)
class LyapunovPredictor:
    cert: LyapunovCertificate
    name = "lyapunov"

    def body(self, x, r) -> Ellipsoid:
        return lyap_ellipsoid(self.cert, x, r)

    def radius(self, x, r) -> float:
        return lyap_radius(self.cert, x, r)

    def evaluate(self, x: np.ndarray, r: np.ndarray):
        """(body, radius) in one pass; the hot path of the simulator."""
        scale = lyap_norm(self.cert, x, r)
        radius = self.cert.shape_norm * scale
        Q = self._shapes.get(r.shape[0])
        if Q is None:
            Q = self._shapes[r.shape[0]] = self.cert.shape(r.shape[0])
        return Ellipsoid._trusted(r, Q, scale, radius), radius

    @property
    def _shapes(self) -> dict:
        try:
            return self.__dict__["_shape_cache"]
        except KeyError:
            cache = self.__dict__["_shape_cache"] = {}
            return cache


@dataclass(frozen=True, eq=False)
class VandermondePredictor:
    reduced: PhdGains
    name = "vandermonde"

    def body(self, x, r) -> Polytope:
        return vandermonde_simplex(self.reduced, x, r)

    def radius(self, x, r) -> float:
        return vandermonde_radius(self.reduced, x, r)

    def evaluate(self, x: np.ndarray, r: np.ndarray):
        V = vandermonde_vertices(self.reduced, x, r)
        radius = float(np.sqrt(((V[1:] - V[0]) ** 2).sum(axis=1).max()))
        return Polytope._trusted(V), radius


MotionPredictor = Union[LyapunovPredictor, VandermondePredictor]


def make_predictor(kind: str, roots) -> MotionPredictor:
    """Build the ``"lyapunov"`` or ``"vandermonde"`` predictor for PhD roots."""
    if kind == "lyapunov":
        return LyapunovPredictor(solve_lyapunov(companion(gains_from_roots(roots))))
    if kind == "vandermonde":
        gains_from_roots(roots)
        return VandermondePredictor(reduced_gains(roots))
    raise DomainError(f"unknown predictor {kind!r} (expected 'lyapunov' or 'vandermonde')")


def predict(predictor: MotionPredictor, x, s: float, path: ReferencePath):
    return predictor.body(x, path.eval(s))
