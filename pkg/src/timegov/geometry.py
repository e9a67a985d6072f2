"""Convex bodies described by support functions, and distances between them.

Every body exposes its support mapping; distances are computed with GJK on the
Minkowski difference, so discs, polytopes and ellipsoids share one code path.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import sqrt
from typing import Union

import numba
import numpy as np

from .errors import DomainError, NumericError

GJK_MAX_ITER = 128
GJK_REL_TOL = 1e-12

_POLY, _DISC, _ELLIPSOID = 0, 1, 2


def _frozen(a, ndim: int | None = None) -> np.ndarray:
    arr = np.array(a, dtype=float)
    if ndim is not None and arr.ndim != ndim:
        raise DomainError(f"expected a {ndim}-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("non-finite coordinates")
    arr.setflags(write=False)
    return arr


def sym_sqrt(M) -> np.ndarray:
    """Symmetric positive semidefinite square root via eigendecomposition.

    Raises DomainError if ``M`` is not symmetric or has a negative eigenvalue
    (both checked at tolerance 1e-9).
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.shape[0] != M.shape[1]:
        raise DomainError("matrix must be square")
    if not np.allclose(M, M.T, rtol=0.0, atol=1e-9):
        raise DomainError("matrix must be symmetric")
    w, V = np.linalg.eigh(0.5 * (M + M.T))
    if w.min(initial=0.0) < -1e-9:
        raise DomainError(f"matrix has negative eigenvalue {w.min():.3g}")
    w = np.clip(w, 0.0, None)
    R = (V * np.sqrt(w)) @ V.T
    return 0.5 * (R + R.T)


@dataclass(frozen=True, eq=False)
class Disc:
    """Closed Euclidean ball (a disc in the plane)."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _frozen(self.center, 1))
        if not self.radius >= 0.0:
            raise DomainError("disc radius must be nonnegative")
        object.__setattr__(self, "radius", float(self.radius))
        d = self.center.shape[0]
        object.__setattr__(
            self, "_packed", (_DISC, self.center[None, :], np.zeros((d, d)), self.radius)
        )

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def support(self, u: np.ndarray) -> np.ndarray:
        return self.center + (self.radius / np.linalg.norm(u)) * u

    def support_values(self, U: np.ndarray) -> np.ndarray:
        """Support function h(u) = max <x, u> for each row of ``U``."""
        return U @ self.center + self.radius * np.linalg.norm(U, axis=1)

    def bounding_ball(self) -> tuple[np.ndarray, float]:
        return self.center, self.radius


@dataclass(frozen=True, eq=False)
class Polytope:
    """Convex hull of a finite vertex list.

    Vertices need not be extreme points; redundant ones never win a support
    query against the true extremes.
    """

    vertices: np.ndarray

    def __post_init__(self):
        V = _frozen(self.vertices, 2)
        if V.shape[0] == 0:
            raise DomainError("polytope needs at least one vertex")
        object.__setattr__(self, "vertices", V)
        d = V.shape[1]
        object.__setattr__(self, "_packed", (_POLY, V, np.zeros((d, d)), 0.0))

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    def support(self, u: np.ndarray) -> np.ndarray:
        return self.vertices[np.argmax(self.vertices @ u)]

    def support_values(self, U: np.ndarray) -> np.ndarray:
        return (U @ self.vertices.T).max(axis=1)

    @classmethod
    def _trusted(cls, V: np.ndarray) -> "Polytope":
        # internal fast path for vertex arrays already known to be finite (n, d)
        obj = object.__new__(cls)
        object.__setattr__(obj, "vertices", V)
        object.__setattr__(obj, "_packed", (_POLY, V, np.zeros((V.shape[1], V.shape[1])), 0.0))
        return obj

    @cached_property
    def _ball(self) -> tuple[np.ndarray, float]:
        c = self.vertices.mean(axis=0)
        return c, float(np.sqrt(((self.vertices - c) ** 2).sum(axis=1).max()))

    def bounding_ball(self) -> tuple[np.ndarray, float]:
        return self._ball


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """The set {c + scale * Q^(1/2) v : |v| <= 1} for PSD shape matrix Q."""

    center: np.ndarray
    shape: np.ndarray
    scale: float

    def __post_init__(self):
        c = _frozen(self.center, 1)
        Q = _frozen(np.atleast_2d(self.shape), 2)
        if Q.shape != (c.shape[0], c.shape[0]):
            raise DomainError("shape matrix does not match center dimension")
        if np.abs(Q - Q.T).max() > 1e-12:
            raise DomainError("shape matrix must be symmetric")
        eig = np.linalg.eigvalsh(Q)
        if eig[0] < -1e-9:
            raise DomainError("shape matrix must be positive semidefinite")
        if not self.scale >= 0.0:
            raise DomainError("ellipsoid scale must be nonnegative")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "shape", Q)
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(self, "_packed", (_ELLIPSOID, c[None, :], Q, self.scale))
        object.__setattr__(self, "_extent", self.scale * sqrt(max(float(eig[-1]), 0.0)))

    @classmethod
    def _trusted(cls, c: np.ndarray, Q: np.ndarray, scale: float, extent: float) -> "Ellipsoid":
        # internal fast path: Q already validated PSD, extent = scale * sqrt(max eig Q)
        obj = object.__new__(cls)
        object.__setattr__(obj, "center", c)
        object.__setattr__(obj, "shape", Q)
        object.__setattr__(obj, "scale", scale)
        object.__setattr__(obj, "_packed", (_ELLIPSOID, c[None, :], Q, scale))
        object.__setattr__(obj, "_extent", extent)
        return obj

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def support(self, u: np.ndarray) -> np.ndarray:
        Qu = self.shape @ u
        q = float(u @ Qu)
        if q <= 0.0 or self.scale == 0.0:
            return self.center.copy()
        return self.center + (self.scale / sqrt(q)) * Qu

    def support_values(self, U: np.ndarray) -> np.ndarray:
        q = np.einsum("ij,jk,ik->i", U, self.shape, U)
        return U @ self.center + self.scale * np.sqrt(np.clip(q, 0.0, None))

    def bounding_ball(self) -> tuple[np.ndarray, float]:
        return self.center, self._extent


ConvexBody = Union[Disc, Polytope, Ellipsoid]


def point(p) -> Polytope:
    """A single point as a degenerate polytope."""
    return Polytope(np.atleast_2d(np.asarray(p, dtype=float)))


def support_point(body: ConvexBody, direction) -> np.ndarray:
    """Point of ``body`` maximizing <x, direction>."""
    u = np.asarray(direction, dtype=float)
    if u.shape != (body.dim,):
        raise DomainError(f"direction must have shape ({body.dim},)")
    if not np.any(u):
        raise DomainError("support direction must be nonzero")
    return body.support(u)


@numba.njit(cache=True)
def _support(kind, pts, mat, scal, u):
    d = u.shape[0]
    out = np.empty(d)
    if kind == _POLY:
        best = 0
        best_val = -np.inf
        for i in range(pts.shape[0]):
            val = 0.0
            for j in range(d):
                val += pts[i, j] * u[j]
            if val > best_val:
                best_val = val
                best = i
        for j in range(d):
            out[j] = pts[best, j]
    elif kind == _DISC:
        nrm = 0.0
        for j in range(d):
            nrm += u[j] * u[j]
        f = scal / np.sqrt(nrm)
        for j in range(d):
            out[j] = pts[0, j] + f * u[j]
    else:
        Qu = mat @ u
        q = 0.0
        for j in range(d):
            q += u[j] * Qu[j]
        f = scal / np.sqrt(q) if (q > 0.0 and scal > 0.0) else 0.0
        for j in range(d):
            out[j] = pts[0, j] + f * Qu[j]
    return out


@numba.njit(cache=True)
def _solve_small(G, b):
    """Gaussian elimination with partial pivoting; flags rank deficiency."""
    m = G.shape[0]
    A = G.copy()
    x = b.copy()
    scale = 0.0
    for i in range(m):
        scale = max(scale, abs(A[i, i]))
    for c in range(m):
        p = c
        for r in range(c + 1, m):
            if abs(A[r, c]) > abs(A[p, c]):
                p = r
        if abs(A[p, c]) <= 1e-12 * scale:
            return False, x
        if p != c:
            for j in range(m):
                A[c, j], A[p, j] = A[p, j], A[c, j]
            x[c], x[p] = x[p], x[c]
        for r in range(c + 1, m):
            f = A[r, c] / A[c, c]
            for j in range(c, m):
                A[r, j] -= f * A[c, j]
            x[r] -= f * x[c]
    for c in range(m - 1, -1, -1):
        acc = x[c]
        for j in range(c + 1, m):
            acc -= A[c, j] * x[j]
        x[c] = acc / A[c, c]
    return True, x


@numba.njit(cache=True)
def _closest_on_simplex(W, k):
    """Minimum-norm point of conv(W[:k]); compacts W to the supporting face.

    Only faces containing the newest vertex W[k-1] are searched. The closest
    point lies in the relative interior of one such face, where it equals the
    projection of the origin onto that face's affine hull.
    """
    d = W.shape[1]
    newest = W[k - 1].copy()
    best_v = newest.copy()
    best_nn = 0.0
    for j in range(d):
        best_nn += newest[j] * newest[j]
    best_mask = 0
    best_mu = np.zeros(k)
    for mask in range(1, 1 << (k - 1)):
        idx = np.empty(k - 1, dtype=np.int64)
        m = 0
        for i in range(k - 1):
            if mask & (1 << i):
                idx[m] = i
                m += 1
        E = np.empty((m, d))
        for a in range(m):
            for j in range(d):
                E[a, j] = W[idx[a], j] - newest[j]
        G = E @ E.T
        rhs = -(E @ newest)
        ok, mu = _solve_small(G, rhs)
        if not ok:
            continue
        total = 0.0
        neg = False
        for a in range(m):
            total += mu[a]
            if mu[a] < 0.0:
                neg = True
        if neg or total > 1.0:
            continue
        v = newest + mu @ E
        nn = 0.0
        for j in range(d):
            nn += v[j] * v[j]
        if nn < best_nn:
            best_nn = nn
            best_v = v
            best_mask = mask
            best_mu[:] = 0.0
            for a in range(m):
                best_mu[idx[a]] = mu[a]
    n_keep = 0
    for i in range(k - 1):
        if (best_mask & (1 << i)) and best_mu[i] > 0.0:
            W[n_keep] = W[i]
            n_keep += 1
    W[n_keep] = newest
    return best_v, best_nn, n_keep + 1


@numba.njit(cache=True)
def _gjk(ka, pa, ma, sa, kb, pb, mb, sb, u0, max_iter, rel_tol):
    d = u0.shape[0]
    W = np.empty((d + 1, d))
    nz = False
    for j in range(d):
        if u0[j] != 0.0:
            nz = True
    if not nz:
        u0 = np.zeros(d)
        u0[0] = 1.0
    v = _support(ka, pa, ma, sa, -u0) - _support(kb, pb, mb, sb, u0)
    W[0] = v
    k = 1
    vv = 0.0
    for j in range(d):
        vv += v[j] * v[j]
    for _ in range(max_iter):
        if vv == 0.0:
            return 0.0, True
        w = _support(ka, pa, ma, sa, -v) - _support(kb, pb, mb, sb, v)
        vw = 0.0
        ww = 0.0
        for j in range(d):
            vw += v[j] * w[j]
            ww += w[j] * w[j]
        if vv - vw <= rel_tol * vv:
            return np.sqrt(vv), True
        W[k] = w
        v_new, vv_new, k = _closest_on_simplex(W, k + 1)
        if k == d + 1:
            return 0.0, True
        if vv_new >= vv:
            # roundoff floor: no further progress possible
            return np.sqrt(vv), True
        v = v_new
        vv = vv_new
        if vv <= 1e-28 * max(1.0, ww):
            return 0.0, True
    return np.sqrt(vv), False


@numba.njit(cache=True)
def _free_gap(kind, pts, mat, scal, bc, bR, normals, offsets,
              ob_kind, ob_ptr, ob_pts, ob_mat, ob_scal, ob_c, ob_R,
              stop_below, max_iter, rel_tol):
    """min(workspace margin, obstacle distances) of one body.

    Obstacles are visited in order of their bounding-ball lower bound and
    skipped once that bound cannot improve the minimum. The search also stops
    as soon as the minimum drops to ``stop_below``.
    """
    d = bc.shape[0]
    best = np.inf
    for i in range(normals.shape[0]):
        sp = _support(kind, pts, mat, scal, normals[i])
        m = offsets[i]
        for j in range(d):
            m -= sp[j] * normals[i, j]
        if m < best:
            best = m
    if best <= stop_below:
        return best, True
    no = ob_kind.shape[0]
    lbs = np.empty(no)
    for k in range(no):
        dd = 0.0
        for j in range(d):
            dd += (bc[j] - ob_c[k, j]) ** 2
        lbs[k] = np.sqrt(dd) - bR - ob_R[k]
    for k in np.argsort(lbs):
        if lbs[k] >= best:
            break
        dist, ok = _gjk(kind, pts, mat, scal, ob_kind[k], ob_pts[ob_ptr[k]:ob_ptr[k + 1]],
                        ob_mat[k], ob_scal[k], bc - ob_c[k], max_iter, rel_tol)
        if not ok:
            return best, False
        if dist < best:
            best = dist
        if best <= stop_below:
            break
    return best, True


def gjk_distance(A: ConvexBody, B: ConvexBody) -> float:
    """Euclidean distance between two convex bodies (0 when they overlap)."""
    if A.dim != B.dim:
        raise DomainError(f"dimension mismatch: {A.dim} vs {B.dim}")
    u = A._packed[1][0] - B._packed[1][0]
    dist, converged = _gjk(*A._packed, *B._packed, u, GJK_MAX_ITER, GJK_REL_TOL)
    if not converged:
        raise NumericError(f"GJK did not converge within {GJK_MAX_ITER} iterations")
    return float(dist)


def edge_normals(region: Polytope) -> tuple[np.ndarray, np.ndarray]:
    """Outward unit normals and offsets of a counterclockwise convex polygon."""
    V = region.vertices
    if V.shape[1] != 2 or V.shape[0] < 3:
        raise DomainError("region must be a planar polygon with at least 3 vertices")
    E = np.roll(V, -1, axis=0) - V
    area2 = float(np.sum(V[:, 0] * np.roll(V[:, 1], -1) - np.roll(V[:, 0], -1) * V[:, 1]))
    if area2 <= 1e-12:
        raise DomainError("region must be counterclockwise with positive area")
    lengths = np.linalg.norm(E, axis=1)
    keep = lengths > 0.0
    N = np.column_stack([E[keep, 1], -E[keep, 0]]) / lengths[keep, None]
    offsets = np.einsum("ij,ij->i", N, V[keep])
    return N, offsets


def containment_margin(body: ConvexBody, region: Polytope) -> float:
    """Signed margin of ``body`` inside a convex polygon.

    Nonnegative iff the body lies inside; when negative, its magnitude is the
    depth of the deepest protrusion across an edge line.
    """
    N, offsets = edge_normals(region)
    return float(np.min(offsets - body.support_values(N)))


def set_radius(body: ConvexBody, center, directions: np.ndarray | None = None) -> float:
    """Largest distance from ``center`` to a point of ``body``."""
    center = np.asarray(center, dtype=float)
    if isinstance(body, Polytope):
        return float(np.sqrt(((body.vertices - center) ** 2).sum(axis=1).max()))
    if isinstance(body, Disc):
        return float(np.linalg.norm(body.center - center)) + body.radius
    if directions is None:
        directions = sphere_directions(body.dim, 4096)
    pts = np.array([body.support(u) for u in directions])
    return float(np.sqrt(((pts - center) ** 2).sum(axis=1).max()))


def sphere_directions(d: int, count: int) -> np.ndarray:
    """Deterministic, roughly uniform unit directions in R^d."""
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if d == 2:
        th = 2.0 * np.pi * np.arange(count) / count
        return np.column_stack([np.cos(th), np.sin(th)])
    if d == 3:
        k = np.arange(count) + 0.5
        z = 1.0 - 2.0 * k / count
        phi = np.pi * (1.0 + sqrt(5.0)) * k
        rho = np.sqrt(1.0 - z * z)
        return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])
    rng = np.random.default_rng(d)
    U = rng.standard_normal((count, d))
    return U / np.linalg.norm(U, axis=1, keepdims=True)
