"""Proportional-higher-order-derivative (PhD) control of an nth-order integrator.

The robot state is an ``(n, d)`` array whose row k holds the kth time
derivative of the position. Gains come from prescribed negative real
closed-loop roots, which makes the point-stabilized motion nonovershooting.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class PhdGains:
    """Closed-loop roots and the monic polynomial coefficients a_0..a_n."""

    roots: tuple[float, ...]
    coeffs: tuple[float, ...]

    @property
    def order(self) -> int:
        return len(self.roots)


def _expand(roots: Sequence[float]) -> tuple[float, ...]:
    # ascending coefficients of prod(lam - root); exact for small integer roots
    c = [1.0]
    for r in roots:
        nxt = [0.0] * (len(c) + 1)
        for k, ck in enumerate(c):
            nxt[k + 1] += ck
            nxt[k] -= r * ck
        c = nxt
    return tuple(c)


def gains_from_roots(roots: Sequence[float]) -> PhdGains:
    roots = tuple(float(r) for r in roots)
    if not roots:
        raise DomainError("at least one root is required")
    if any(not r < 0.0 for r in roots):
        raise DomainError("roots must be strictly negative")
    return PhdGains(roots, _expand(roots))


def reduced_gains(roots: Sequence[float]) -> PhdGains:
    """Gains for the roots with one occurrence of the largest root removed."""
    roots = list(roots)
    if len(roots) < 2:
        raise DomainError("reduced gains need order n >= 2")
    roots.remove(max(roots))
    return gains_from_roots(roots)


def companion(gains: PhdGains) -> np.ndarray:
    n = gains.order
    A = np.zeros((n, n))
    A[np.arange(n - 1), np.arange(1, n)] = 1.0
    A[-1, :] = -np.asarray(gains.coeffs[:n])
    return A


def reference_state(r, order: int) -> np.ndarray:
    """Stationary state (r, 0, ..., 0) at reference point ``r``."""
    r = np.asarray(r, dtype=float)
    x = np.zeros((order, r.shape[0]))
    x[0] = r
    return x


def phd_accel(gains: PhdGains, x: np.ndarray, r, r_tangent, sdot: float) -> np.ndarray:
    """Highest derivative p^(n) commanded by the PhD law.

    Computes -sum_{k<n} a_k p^(k) + a_0 r + a_1 (dr/ds) sdot, the last block
    row of the closed-loop companion form.
    """
    x = np.asarray(x, dtype=float)
    n = gains.order
    if x.ndim != 2 or x.shape[0] != n:
        raise DomainError(f"state must have shape ({n}, d), got {x.shape}")
    r = np.asarray(r, dtype=float)
    t = np.asarray(r_tangent, dtype=float)
    if r.shape != (x.shape[1],) or t.shape != (x.shape[1],):
        raise DomainError("reference point and tangent must match the state dimension")
    a = gains.coeffs
    return -(np.asarray(a[:n]) @ x) + a[0] * r + (a[1] * sdot) * t
