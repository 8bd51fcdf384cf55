"""Fundamental functions: evaluation, least quasiconcave majorant, classification.

Two families are supported.  ``PowerLogPhi`` is ``scale * t**alpha *
log(2L/t)**beta`` and ``TabulatedPhi`` interpolates positive data linearly.
Both report *breakpoints*: points between which the function and ``phi(t)/t``
are each monotone.  Every supremum below is reduced to endpoint and
breakpoint evaluations through that decomposition, and the refined grid
search of :mod:`marclab.numerics` is used only where no such reduction is
available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from .errors import DomainError, NonAdmissibleError, SchemaError
from .numerics import (DEFAULT_POLICY, NumericPolicy, log_refined_max,
                       log_refined_min)

INF = math.inf


def _as_length(value: Any) -> float:
    if value is None or value == "inf" or value == "Infinity":
        return INF
    return float(value)


class PhiLike:
    """Common machinery for positive functions on ``(0, L)``.

    Subclasses implement ``_eval`` (vectorised, tolerant of ``t == L`` for
    finite ``L``, where it returns the left limit), ``breakpoints``,
    ``limit_zero`` and ``ratio_limit_infinity``.
    """

    L: float

    # -- to be provided by subclasses -------------------------------------
    def _eval(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def breakpoints(self) -> tuple[float, ...]:
        raise NotImplementedError

    def limit_zero(self) -> float:
        raise NotImplementedError

    def ratio_limit_infinity(self) -> float:
        raise NotImplementedError

    # -- shared ------------------------------------------------------------
    def __call__(self, t: float) -> float:
        t = float(t)
        if not 0 < t < self.L:
            raise DomainError(f"t={t!r} outside (0, {self.L})")
        return float(self._eval(np.array([t]))[0])

    def values(self, t) -> np.ndarray:
        """Vectorised evaluation without domain checks (``t == L`` is the left limit)."""
        return self._eval(np.asarray(t, dtype=float))

    def at(self, t: float) -> float:
        """Value at ``t`` with ``t == 0`` and ``t == L`` read as one-sided limits."""
        t = float(t)
        if t == 0:
            return self.limit_zero()
        if t == INF:
            raise DomainError("no value at infinity")
        return float(self._eval(np.array([t]))[0])

    def _inner_breakpoints(self, lo: float, hi: float) -> list[float]:
        return [b for b in self.breakpoints() if lo < b < hi]

    def sup_on(self, lo: float, hi: float) -> tuple[float, Any]:
        """``sup`` of the function over ``[lo, hi)`` (``lo == 0`` means ``(0, hi)``).

        Exact up to floating point: the function is monotone between
        breakpoints, so the supremum is attained at an endpoint (as a
        one-sided limit) or at a breakpoint.  Returns ``(value, where)``.
        """
        lo, hi = float(lo), float(hi)
        cands: list[tuple[float, Any]] = []
        if lo == 0:
            cands.append((self.limit_zero(), "0+"))
        else:
            cands.append((self.at(lo), lo))
        if hi == INF:
            cands.append((self.limit_infinity(), "inf"))
        else:
            cands.append((self.at(hi), hi))
        cands.extend((self.at(b), b) for b in self._inner_breakpoints(lo, hi))
        return max(cands, key=lambda c: c[0])

    def limit_infinity(self) -> float:
        raise NotImplementedError

    def sup_ratio_on(self, lo: float, hi: float) -> tuple[float, Any]:
        """``sup`` of ``phi(s)/s`` over ``[lo, hi)``, ``lo > 0``."""
        lo, hi = float(lo), float(hi)
        if lo <= 0:
            raise DomainError("ratio supremum needs lo > 0")
        cands: list[tuple[float, Any]] = [(self.at(lo) / lo, lo)]
        if hi == INF:
            cands.append((self.ratio_limit_infinity(), "inf"))
        else:
            cands.append((self.at(hi) / hi, hi))
        cands.extend((self.at(b) / b, b) for b in self._inner_breakpoints(lo, hi))
        return max(cands, key=lambda c: c[0])

    def scan_limit(self, policy: NumericPolicy = DEFAULT_POLICY) -> float:
        """Upper end of numeric scans: ``L`` or the policy horizon."""
        return self.L if self.L < INF else policy.horizon

    def dilation_limit_zero(self, a: float) -> Optional[float]:
        """``lim_{t->0+} phi(a t)/phi(t)`` when known in closed form, else ``None``."""
        return None


MIN_BREAK_OCTAVES = 240


def _safe_exp(x: float) -> float:
    return INF if x > 700 else math.exp(x)


@dataclass(frozen=True)
class PowerLogPhi(PhiLike):
    """``phi(t) = scale * t**alpha * log(2L/t)**beta`` on ``(0, L)``."""

    alpha: float
    beta: float = 0.0
    L: float = 1.0
    scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "L", _as_length(self.L))
        if not self.L > 0:
            raise DomainError("L must be positive")
        if self.L == INF and self.beta != 0:
            raise DomainError("beta != 0 needs a finite L")
        if not self.scale > 0:
            raise DomainError("scale must be positive")
        floor = self.L * 2.0 ** -MIN_BREAK_OCTAVES if self.L < INF else 0.0
        for p in self.breakpoints():
            if p < floor:
                raise DomainError(f"phi changes monotonicity at t = {p:.3g}, below the numeric scan range")

    def _eval(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            out = self.scale * np.power(t, self.alpha)
            if self.beta != 0:
                out = out * np.power(np.log(2.0 * self.L / t), self.beta)
        return out

    def breakpoints(self) -> tuple[float, ...]:
        if self.beta == 0 or self.L == INF:
            return ()
        pts = []
        # d/dt log phi vanishes where alpha*log(2L/t) = beta
        if self.alpha != 0:
            pts.append(2.0 * self.L * _safe_exp(-self.beta / self.alpha))
        # d/dt log(phi/t) vanishes where (alpha - 1)*log(2L/t) = beta
        if self.alpha != 1:
            pts.append(2.0 * self.L * _safe_exp(-self.beta / (self.alpha - 1.0)))
        return tuple(sorted(p for p in pts if p < self.L))

    def dilation_limit_zero(self, a: float) -> Optional[float]:
        # the logarithmic factors have ratio tending to 1
        return float(a) ** self.alpha

    def limit_zero(self) -> float:
        if self.alpha > 0:
            return 0.0
        if self.alpha < 0:
            return INF
        if self.beta < 0:
            return 0.0
        return self.scale if self.beta == 0 else INF

    def ratio_limit_infinity(self) -> float:
        if self.L < INF:
            raise DomainError("finite domain has no limit at infinity")
        if self.alpha < 1:
            return 0.0
        return self.scale if self.alpha == 1 else INF

    def limit_infinity(self) -> float:
        if self.L < INF:
            raise DomainError("finite domain has no limit at infinity")
        if self.alpha > 0:
            return INF
        return self.scale if self.alpha == 0 else 0.0

    def t_over_phi_limit(self) -> str:
        """Classification of ``lim_{t->0+} t/phi(t)`` from the asymptotics."""
        if self.alpha < 1:
            return "zero"
        if self.alpha > 1:
            return "infinite"
        if self.beta > 0:
            return "zero"
        return "positive_finite" if self.beta == 0 else "infinite"

    def to_json(self) -> dict:
        d = {"family": "power_log", "alpha": self.alpha, "beta": self.beta,
             "L": "inf" if self.L == INF else self.L}
        if self.scale != 1.0:
            d["scale"] = self.scale
        return d


@dataclass(frozen=True)
class TabulatedPhi(PhiLike):
    """Piecewise-linear interpolation of positive ``heights`` on ``grid``.

    Beyond the last node the function stays constant.  Before the first
    node it is either constant (``left_tail="constant"``) or proportional to
    ``t`` (``left_tail="proportional"``).
    """

    grid: tuple[float, ...]
    heights: tuple[float, ...]
    L: float = 1.0
    scale: float = 1.0
    left_tail: str = "constant"

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(float(g) for g in self.grid))
        object.__setattr__(self, "heights", tuple(float(v) for v in self.heights))
        object.__setattr__(self, "L", _as_length(self.L))
        g = np.asarray(self.grid)
        if len(self.grid) == 0 or len(self.grid) != len(self.heights):
            raise DomainError("grid and values must be nonempty and of equal length")
        if np.any(np.diff(g) <= 0) or g[0] <= 0 or g[-1] >= self.L:
            raise DomainError("grid must be strictly increasing inside (0, L)")
        if any(v <= 0 for v in self.heights):
            raise DomainError("tabulated values must be positive")
        if self.left_tail not in ("constant", "proportional"):
            raise DomainError("left_tail must be 'constant' or 'proportional'")

    def dilation_limit_zero(self, a: float) -> Optional[float]:
        return float(a) if self.left_tail == "proportional" else 1.0

    def _eval(self, t):
        t = np.asarray(t, dtype=float)
        g, v = np.asarray(self.grid), np.asarray(self.heights)
        out = np.interp(t, g, v)
        if self.left_tail == "proportional":
            out = np.where(t < g[0], v[0] * t / g[0], out)
        return self.scale * out

    def breakpoints(self) -> tuple[float, ...]:
        return self.grid

    def limit_zero(self) -> float:
        return 0.0 if self.left_tail == "proportional" else self.scale * self.heights[0]

    def ratio_limit_infinity(self) -> float:
        if self.L < INF:
            raise DomainError("finite domain has no limit at infinity")
        return 0.0

    def limit_infinity(self) -> float:
        if self.L < INF:
            raise DomainError("finite domain has no limit at infinity")
        return self.scale * self.heights[-1]

    def t_over_phi_limit(self) -> str:
        return "positive_finite" if self.left_tail == "proportional" else "zero"

    def to_json(self) -> dict:
        d = {"family": "tabulated", "grid": list(self.grid), "values": list(self.heights),
             "L": "inf" if self.L == INF else self.L}
        if self.scale != 1.0:
            d["scale"] = self.scale
        if self.left_tail != "constant":
            d["left_tail"] = self.left_tail
        return d


PhiSpec = PowerLogPhi | TabulatedPhi


def phi_from_json(doc: dict) -> PhiSpec:
    """Parse ``{"family": "power_log", ...}`` or ``{"family": "tabulated", ...}``."""
    try:
        family = doc["family"]
        if family == "power_log":
            return PowerLogPhi(float(doc["alpha"]), float(doc.get("beta", 0.0)),
                               _as_length(doc.get("L", 1.0)), float(doc.get("scale", 1.0)))
        if family == "tabulated":
            return TabulatedPhi(tuple(doc["grid"]), tuple(doc["values"]),
                                _as_length(doc.get("L", 1.0)), float(doc.get("scale", 1.0)),
                                doc.get("left_tail", "constant"))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad phi document: {exc}") from exc
    raise SchemaError(f"unknown phi family {doc.get('family')!r}")


def parse_phi(text: str) -> PhiSpec:
    """Parse the compact CLI form ``power_log:alpha,beta,L`` or a JSON literal."""
    text = text.strip()
    if text.startswith("{"):
        import json
        return phi_from_json(json.loads(text))
    if text.startswith("power_log:"):
        parts = text.split(":", 1)[1].split(",")
        if len(parts) not in (2, 3, 4):
            raise SchemaError("power_log needs alpha,beta[,L[,scale]]")
        alpha, beta = float(parts[0]), float(parts[1])
        L = _as_length(parts[2]) if len(parts) > 2 else 1.0
        scale = float(parts[3]) if len(parts) > 3 else 1.0
        return PowerLogPhi(alpha, beta, L, scale)
    raise SchemaError(f"cannot parse phi {text!r}")


def eval_phi(phi: PhiSpec, t: float) -> float:
    """Value of ``phi`` at ``t``; raises :class:`DomainError` unless ``0 < t < L``."""
    return phi(t)


# ---------------------------------------------------------------------------
# least quasiconcave majorant
# ---------------------------------------------------------------------------

class Majorant(PhiLike):
    """Least quasiconcave majorant of an admissible ``phi``.

    Uses ``t * sup_{s >= t} Phi(s)/s`` with the running maximum
    ``Phi(s) = sup_{(0, s]} phi``.  Between breakpoints of ``phi`` one has
    ``Phi(s) = max(Phi(p), phi(s))`` and ``phi(s)/s`` is monotone, so the
    outer supremum is attained at ``t``, at a breakpoint, or in the limit
    ``s -> L``.
    """

    def __init__(self, phi: PhiLike):
        self.phi = phi
        self.L = phi.L
        bps = np.asarray(phi.breakpoints(), dtype=float)
        self._bps = bps
        lim0 = phi.limit_zero()
        if not math.isfinite(lim0):
            raise NonAdmissibleError("phi is unbounded near 0, so its majorant is infinite")
        vals = phi.values(bps) if len(bps) else np.zeros(0)
        self._lim0 = lim0
        self._run = np.maximum.accumulate(np.concatenate([[lim0], vals]))[1:] if len(bps) else vals
        if phi.L < INF:
            run_end = max(lim0, float(self._run[-1]) if len(bps) else lim0, phi.at(phi.L))
            tail = run_end / phi.L
        else:
            tail = phi.ratio_limit_infinity()
        if not math.isfinite(tail):
            raise NonAdmissibleError("phi(s)/s is unbounded as s grows, so the majorant is infinite")
        self._tail = tail
        cand = self._run / bps if len(bps) else np.zeros(0)
        # suffix[i] = max(cand[i:], tail)
        suffix = np.empty(len(bps) + 1)
        suffix[-1] = tail
        for i in range(len(bps) - 1, -1, -1):
            suffix[i] = max(cand[i], suffix[i + 1])
        self._suffix = suffix

    def running_max(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self._bps, t, side="right")
        prev = np.concatenate([[self._lim0], self._run])[idx] if len(self._bps) else np.full(t.shape, self._lim0)
        return np.maximum(prev, self.phi.values(t))

    def _eval(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self._bps, t, side="right")
        return np.maximum(self.running_max(t), t * self._suffix[idx])

    def breakpoints(self) -> tuple[float, ...]:
        return ()

    def limit_zero(self) -> float:
        return self._lim0

    def ratio_limit_infinity(self) -> float:
        return self._tail

    def limit_infinity(self) -> float:
        if self._tail > 0:
            return INF
        return max(self._lim0, float(np.max(self._run)) if len(self._bps) else 0.0,
                   self.phi.limit_infinity())

    def to_json(self) -> dict:
        return {"majorant_of": self.phi.to_json()}


def majorant(phi: PhiLike) -> Majorant:
    """Build the least quasiconcave majorant, raising :class:`NonAdmissibleError`."""
    if isinstance(phi, Majorant):
        return phi
    return Majorant(phi)


def is_admissible(phi: PhiLike) -> bool:
    try:
        Majorant(phi)
    except NonAdmissibleError:
        return False
    return True


def least_quasiconcave_majorant(phi: PhiLike, t: float,
                                policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """Value of the least quasiconcave majorant of ``phi`` at ``t``."""
    t = float(t)
    if not 0 < t < phi.L:
        raise DomainError(f"t={t!r} outside (0, {phi.L})")
    return majorant(phi)(t)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhiClassification:
    """Structural properties of ``phi``; ``None`` marks an inconclusive check."""

    is_nondecreasing: Optional[bool]
    is_quasiconcave: Optional[bool]
    is_admissible: bool
    delta2_constant: float
    delta2_near_zero_constant: float
    almost_quasiconcave_constant: Optional[float]
    limit_t_over_phi: str
    inconclusive: tuple[str, ...] = field(default=())

    def to_json(self) -> dict:
        def num(x):
            if x is None:
                return None
            return "inf" if x == INF else x
        return {
            "is_nondecreasing": self.is_nondecreasing,
            "is_quasiconcave": self.is_quasiconcave,
            "is_admissible": self.is_admissible,
            "delta2_constant": num(self.delta2_constant),
            "delta2_near_zero_constant": num(self.delta2_near_zero_constant),
            "almost_quasiconcave_constant": num(self.almost_quasiconcave_constant),
            "limit_t_over_phi": self.limit_t_over_phi,
            "inconclusive": list(self.inconclusive),
        }


def check_grid(phi: PhiLike, policy: NumericPolicy, density: int) -> np.ndarray:
    """Evaluation grid: breakpoints plus geometric points down to ``L * 2**-depth``."""
    top = phi.scan_limit(policy)
    lo = top * 2.0 ** (-policy.depth)
    geo = np.geomspace(lo, top, density * policy.depth // 8 + density)
    lin = np.linspace(top / density, top, density)
    pts = np.union1d(np.union1d(geo, lin), np.asarray(phi.breakpoints(), dtype=float))
    return pts[(pts > 0) & (pts <= top)]


def _monotone(vals: np.ndarray, increasing: bool, tol: float) -> bool:
    d = np.diff(vals)
    scale = np.maximum(np.abs(vals[:-1]), np.abs(vals[1:]))
    if increasing:
        return bool(np.all(d >= -tol * scale))
    return bool(np.all(d <= tol * scale))


def _grid_flag(phi: PhiLike, policy: NumericPolicy, test) -> Optional[bool]:
    g = policy.grid_points_per_piece
    coarse = test(check_grid(phi, policy, g))
    fine = test(check_grid(phi, policy, 2 * g))
    return coarse if coarse == fine else None


def is_nondecreasing(phi: PhiLike, policy: NumericPolicy = DEFAULT_POLICY) -> Optional[bool]:
    return _grid_flag(phi, policy,
                      lambda ts: _monotone(phi.values(ts), True, policy.tol_rel))


def ratio_is_nonincreasing(phi: PhiLike, policy: NumericPolicy = DEFAULT_POLICY) -> Optional[bool]:
    return _grid_flag(phi, policy,
                      lambda ts: _monotone(phi.values(ts) / ts, False, policy.tol_rel))


def _limit_or(value: Optional[float], default: float) -> float:
    return default if value is None else value


def delta2_constant(phi: PhiLike, policy: NumericPolicy = DEFAULT_POLICY,
                    upto: Optional[float] = None) -> float:
    """``sup phi(2t)/phi(t)`` over ``t in (0, upto)``; ``upto`` defaults to ``L/2``."""
    top = phi.scan_limit(policy)
    hi = top / 2.0 if upto is None else min(float(upto), top / 2.0)
    lo = hi * 2.0 ** (-policy.depth)
    if phi.limit_zero() == INF:
        return INF
    with np.errstate(divide="ignore", invalid="ignore"):
        v, _ = log_refined_max(lambda t: phi.values(2 * t) / phi.values(t), lo, hi, policy)
    v = max(v, _limit_or(phi.dilation_limit_zero(2.0), -INF))
    return v if np.isfinite(v) else INF


def near_zero_threshold(phi: PhiLike, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    return phi.scan_limit(policy) * 2.0 ** -8


def almost_quasiconcave_constant(phi: PhiLike, policy: NumericPolicy = DEFAULT_POLICY) -> Optional[float]:
    """``inf phi/phi~`` when it stays positive near 0, else ``None``.

    The infimum is taken over two geometric grids reaching ``depth`` and
    ``2*depth`` octaves below ``L``; if the deeper grid lowers it the ratio
    is still decaying towards 0 and no constant exists.
    """
    try:
        maj = Majorant(phi)
    except NonAdmissibleError:
        return None
    top = phi.scan_limit(policy)
    infs = []
    for depth in (policy.depth, 2 * policy.depth):
        lo = top * 2.0 ** (-depth)
        if lo <= 1e-300:
            lo = 1e-300
        ts = np.union1d(np.geomspace(lo, top, 8 * depth),
                        np.asarray(phi.breakpoints(), dtype=float))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = phi.values(ts) / maj.values(ts)
        infs.append(float(np.nanmin(ratio)))
    if infs[1] < infs[0] * (1 - 1e-6) or not infs[1] > 0:
        return None
    return min(1.0, infs[1])


def limit_t_over_phi(phi: PhiLike) -> str:
    """``zero``, ``positive_finite`` or ``infinite`` for ``lim_{t->0+} t/phi(t)``."""
    if isinstance(phi, (PowerLogPhi, TabulatedPhi)):
        return phi.t_over_phi_limit()
    raise DomainError("limit classification needs a known family")


def classify_phi(phi: PhiLike, policy: NumericPolicy = DEFAULT_POLICY) -> PhiClassification:
    """Decide every structural hypothesis used on ``phi`` by the constructions."""
    inconclusive = []
    nondec = is_nondecreasing(phi, policy)
    ratio_noninc = ratio_is_nonincreasing(phi, policy)
    if nondec is None:
        inconclusive.append("is_nondecreasing")
    if nondec is None or ratio_noninc is None:
        qc = None
        inconclusive.append("is_quasiconcave")
    else:
        qc = nondec and ratio_noninc
    return PhiClassification(
        is_nondecreasing=nondec,
        is_quasiconcave=qc,
        is_admissible=is_admissible(phi),
        delta2_constant=delta2_constant(phi, policy),
        delta2_near_zero_constant=delta2_constant(phi, policy, upto=near_zero_threshold(phi, policy)),
        almost_quasiconcave_constant=almost_quasiconcave_constant(phi, policy),
        limit_t_over_phi=limit_t_over_phi(phi),
        inconclusive=tuple(inconclusive),
    )


# ---------------------------------------------------------------------------
# hypotheses of the equimeasurable-family criterion
# ---------------------------------------------------------------------------

def not_too_constant_margin(phi: PhiLike, a: float, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """``inf phi(a t)/phi(t)`` over ``t in (0, L/a)``."""
    a = float(a)
    if not a > 1:
        raise DomainError("dilation factor must exceed 1")
    hi = phi.scan_limit(policy) / a
    lo = hi * 2.0 ** (-policy.depth)
    with np.errstate(divide="ignore", invalid="ignore"):
        v, _ = log_refined_min(lambda t: phi.values(a * t) / phi.values(t), lo, hi, policy)
    return min(v, _limit_or(phi.dilation_limit_zero(a), INF))


def margin_growth_exponent(phi: PhiLike, policy: NumericPolicy = DEFAULT_POLICY,
                           octaves: int = 64) -> float:
    """Log-log slope of the not-too-constant margin between ``2**(n/2)`` and ``2**n``.

    A positive slope means the margin grows like a power of the dilation
    factor, so it is unbounded; slowly varying ``phi`` give slope 0.
    """
    m1 = not_too_constant_margin(phi, 2.0 ** (octaves // 2), policy)
    m2 = not_too_constant_margin(phi, 2.0 ** octaves, policy)
    return math.log(m2 / m1) / (math.log(2.0) * (octaves - octaves // 2))


def dilation_sup(phi: PhiLike, theta: float, policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """``sup phi(t)/phi(theta t)`` over ``t in (0, L)``."""
    top = phi.scan_limit(policy)
    lo = top * 2.0 ** (-policy.depth)
    with np.errstate(divide="ignore", invalid="ignore"):
        v, _ = log_refined_max(lambda t: phi.values(t) / phi.values(theta * t), lo, top, policy)
    return max(v, _limit_or(phi.dilation_limit_zero(1.0 / theta), -INF))


def dilation_condition_value(phi: PhiLike, policy: NumericPolicy = DEFAULT_POLICY,
                             steps: int = 40) -> float:
    """``inf`` over ``theta = 1 - 2**-j`` of ``sup_t phi(t)/phi(theta t)``."""
    return min(dilation_sup(phi, 1.0 - 2.0 ** (-j), policy) for j in range(1, steps + 1))


def sigma_threshold(phi: PhiLike, case: str, eps: float, tau: float, muS: float, k: int,
                    normT: float, r: float, C_phi: float = 1.0,
                    policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """Smallest admissible ``sigma`` for the covering-number contradiction.

    ``case="m"``: ``eps*sigma*phi~(eps*tau*muS/k) > 2/C_phi**2 * (normT + r)``.
    ``case="M"``: ``eps*sigma*phi~(tau*muS/k) > normT + r``.
    One ``tol_rel`` is added on top of the equality value.
    """
    if not 0 < eps < 1:
        raise DomainError("eps must lie in (0, 1)")
    if not 0 < tau <= 1 or k < 1:
        raise DomainError("need tau in (0, 1] and k >= 1")
    maj = majorant(phi)
    if case == "m":
        arg, rhs = eps * tau * muS / k, 2.0 / C_phi ** 2 * (normT + r)
    elif case == "M":
        arg, rhs = tau * muS / k, normT + r
    else:
        raise DomainError(f"unknown case {case!r}")
    if not 0 < arg <= maj.L:
        raise DomainError("majorant argument outside the domain")
    value = maj.at(arg)
    if not value > 0:
        raise DomainError("majorant vanishes at the threshold argument")
    return rhs / (eps * value) * (1.0 + policy.tol_rel)


def sample_power_log(rng, admissible_only: bool = True, max_tries: int = 1000) -> PowerLogPhi:
    """Random ``t^alpha log(2L/t)^beta`` with ``alpha in [0, 3/2]``, ``beta in [-3/2, 3/2]``."""
    for _ in range(max_tries):
        alpha = float(rng.choice([0.0, 0.5, 1.0, rng.uniform(0.0, 1.5)]))
        beta = float(rng.choice([0.0, rng.uniform(-1.5, 1.5)]))
        L = float(rng.choice([0.5, 1.0, 2.0]))
        try:
            phi = PowerLogPhi(alpha, beta, L)
        except DomainError:
            continue
        if not admissible_only or is_admissible(phi):
            return phi
    raise DomainError("no admissible sample found")
