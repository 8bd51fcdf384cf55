"""Driver for the shrinking-support criterion on embeddings."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ..norms import norm_M_phi, norm_m_phi
from ..numerics import DEFAULT_POLICY, NumericPolicy
from ..phi import PhiLike
from ..stepfn import StepFunction
from .certificates import Verdict, failed, passed
from .packing import unit_ball_volume


@dataclass(frozen=True)
class ShrinkEntry:
    x_norm: float
    y_norm: float
    radius: float


def shrinking_driver(entries: Sequence[ShrinkEntry], alpha0: float, phi: Optional[PhiLike] = None,
                     normI: Optional[float] = None, tol: float = 1e-9) -> Verdict:
    """Verdict ``PASS`` certifies ``alpha(I) >= alpha0`` from the attested sequence."""
    if not entries:
        return failed(alpha0, "sequence", detail="empty sequence")
    if normI is not None and not 0 < alpha0 < normI:
        return failed(alpha0, "bound_below_norm")
    if phi is not None and phi.limit_zero() != 0:
        return failed(alpha0, "phi_vanishing_at_zero", detail=f"phi(0+) = {phi.limit_zero()}")
    prev = math.inf
    for j, e in enumerate(entries):
        if not 0 < e.radius < prev:
            return failed(alpha0, "radii_decreasing", j, f"radius {e.radius} after {prev}")
        prev = e.radius
    for j, e in enumerate(entries):
        if abs(e.x_norm - 1) > tol:
            return failed(alpha0, "unit_ball", j)
    for j, e in enumerate(entries):
        if e.y_norm < alpha0 * (1 - tol):
            return failed(alpha0, "y_norm_below_alpha0", j, f"{e.y_norm} < {alpha0}")
    trace = [{"length": len(entries), "min_y_norm": min(e.y_norm for e in entries),
              "last_radius": entries[-1].radius}]
    return passed(alpha0, trace, f"alpha(I) >= {alpha0}")


def maximal_noncompactness(verdicts: Sequence[Verdict], normI: float) -> str:
    """Conclusion drawn from passing verdicts at levels approaching ``normI``."""
    if verdicts and all(v.passed for v in verdicts):
        best = max(v.bound for v in verdicts)
        return f"alpha(I) >= {best} with ||I|| = {normI}; maximal noncompactness holds on the supplied grid"
    return "inconclusive"


def indicator_sequence(phi: PhiLike, n: int, radii: Sequence[float], which: str = "m",
                       policy: NumericPolicy = DEFAULT_POLICY) -> list[ShrinkEntry]:
    """Entries for ``f_j = chi_{B_j}/phi(|B_j|)`` on balls of the given radii."""
    omega = float(unit_ball_volume(n))
    out = []
    for rho in radii:
        vol = omega * rho ** n
        f = StepFunction.from_values([1.0 / phi(vol)], [Fraction(vol)], phi.L)
        y = (norm_m_phi if which == "m" else norm_M_phi)(f, phi, policy).value
        out.append(ShrinkEntry(1.0, y, rho))
    return out
