"""Separation oracle: a covering-radius lower bound from pairwise distances."""

from __future__ import annotations

import itertools
from typing import Callable, Optional, Sequence

from ..errors import DomainError
from ..norms import norm, quasinorm_constant_Y
from ..numerics import DEFAULT_POLICY, NumericPolicy
from ..phi import PhiLike
from ..stepfn import StepFunction


def pairwise_distances(points: Sequence[StepFunction], phi: PhiLike, which: str,
                       policy: NumericPolicy = DEFAULT_POLICY) -> dict[tuple[int, int], float]:
    out = {}
    for i, j in itertools.combinations(range(len(points)), 2):
        out[(i, j)] = norm(points[i].layout() - points[j].layout(), phi, which, policy).value
    return out


def separation_lower_bound(points: Sequence[StepFunction], phi: PhiLike, which: str,
                           policy: NumericPolicy = DEFAULT_POLICY, C_Y: Optional[float] = None) -> float:
    """``min_{i<j} ||p_i - p_j||_Y / (2 C_Y)``."""
    if len(points) < 2:
        raise DomainError("need at least two points")
    if C_Y is None:
        C_Y = quasinorm_constant_Y(phi, which, policy)
    return min(pairwise_distances(points, phi, which, policy).values()) / (2 * C_Y)


def k_center_radius(n_points: int, k: int, dist: Callable[[int, int], float]) -> float:
    """Exhaustive covering radius with centres restricted to the points themselves."""
    if not 1 <= k <= n_points:
        raise DomainError("need 1 <= k <= number of points")
    best = float("inf")
    for centers in itertools.combinations(range(n_points), k):
        rad = max(min(0.0 if p == c else dist(p, c) for c in centers) for p in range(n_points))
        best = min(best, rad)
    return best
