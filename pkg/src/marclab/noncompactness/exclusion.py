"""Distance exclusion: centres with a large norm cannot meet the image of the unit ball."""

from __future__ import annotations

from ..errors import DomainError


def distance_exclusion_bound(normT: float, r: float, C_Y: float = 1.0) -> float:
    """``C_Y (||T|| + r)``; a centre ``g`` with a larger norm misses ``T(B_X)`` by more than ``r``."""
    if not r > 0:
        raise DomainError("radius must be positive")
    if C_Y < 1:
        raise DomainError("quasinorm constants are at least 1")
    return C_Y * (normT + r)


def exclusion_lower_estimate(g_norm: float, Tf_norm: float, C_Y: float = 1.0) -> float:
    """Lower estimate ``||g||/C_Y - ||Tf||`` of ``||g - Tf||`` from the quasi-triangle inequality."""
    return g_norm / C_Y - Tf_norm
