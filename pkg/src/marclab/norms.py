"""Marcinkiewicz quasinorms of step functions.

``||f||_m = sup phi f*`` and ``||f||_M = sup phi f**``.  On each piece of the
rearrangement ``f*`` is constant, so the m-norm only needs suprema of
``phi`` over intervals.  For the M-norm the objective on piece ``k`` is
``v phi(t) + D phi(t)/t`` with ``v, D >= 0``; between breakpoints of ``phi``
it is monotone unless ``phi`` increases while ``phi(t)/t`` decreases, and only
that mixed case needs a refined search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from .errors import DomainError, NonAdmissibleError
from .numerics import DEFAULT_POLICY, NumericPolicy, refined_max
from .phi import PhiLike, almost_quasiconcave_constant, delta2_constant, majorant
from .reporting import csv_text
from .stepfn import MaximalProfile, StepFunction, rearrangement

INF = math.inf


@dataclass(frozen=True)
class NormResult:
    """Value of a quasinorm with the point (or limit descriptor) where it is attained."""

    value: float
    attaining_t: Any
    method: str
    tolerance: float

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)

    def to_json(self) -> dict:
        return {"value": self.value, "attaining_t": self.attaining_t,
                "method": self.method, "tolerance": self.tolerance}


@dataclass(frozen=True)
class PieceSup:
    lo: float
    hi: float
    sup: float
    where: Any
    method: str


def _fl(x) -> float:
    return float(x)


def fstar_piece_sups(f: StepFunction, phi: PhiLike) -> list[PieceSup]:
    """``sup phi f*`` over each piece ``[t_{k-1}, t_k)`` of the rearrangement."""
    out = []
    for a, b, v in rearrangement(f).pieces():
        lo, hi = _fl(a), min(_fl(b), phi.L)
        s, where = phi.sup_on(lo, hi)
        out.append(PieceSup(lo, hi, _fl(v) * s, where, "exact-piece"))
    return out


def norm_m_phi(f: StepFunction, phi: PhiLike, policy: NumericPolicy = DEFAULT_POLICY) -> NormResult:
    """``sup_t phi(t) f*(t)``, exact up to floating point."""
    sups = fstar_piece_sups(f, phi)
    if not sups:
        return NormResult(0.0, None, "exact-piece", 0.0)
    best = max(sups, key=lambda p: p.sup)
    return NormResult(best.sup, best.where, "exact-piece", 0.0)


def _monotone_pieces(phi: PhiLike, lo: float, hi: float) -> list[tuple[float, float]]:
    cuts = [lo] + [b for b in phi.breakpoints() if lo < b < hi] + [hi]
    return list(zip(cuts, cuts[1:]))


def _maximal_piece_sup(phi: PhiLike, a: float, b: float, C: float, v: float,
                       policy: NumericPolicy) -> tuple[float, Any, str]:
    """``sup phi(t)(C + v(t-a))/t`` over ``[a, b]`` with ``a > 0``."""
    D = C - v * a  # >= 0 because f* is nonincreasing

    def obj(t):
        t = np.asarray(t, dtype=float)
        p = phi.values(t)
        return v * p + D * p / t

    best: tuple[float, Any, str] = (-INF, None, "exact-piece")
    for lo, hi in _monotone_pieces(phi, a, b):
        plo, phi_hi = phi.at(lo), phi.at(hi)
        up = phi_hi >= plo
        ratio_up = phi_hi / hi >= plo / lo
        if up and ratio_up:
            cand = (float(obj([hi])[0]), hi, "exact-piece")
        elif not up:
            cand = (float(obj([lo])[0]), lo, "exact-piece")
        else:
            val, t = refined_max(obj, lo, hi, policy)
            cand = (val, t, "refined-sup")
        if cand[0] > best[0]:
            best = cand
    return best


def fss_piece_sups(f: StepFunction, phi: PhiLike,
                   policy: NumericPolicy = DEFAULT_POLICY) -> list[PieceSup]:
    """``sup phi f**`` over each piece of the rearrangement and over the tail."""
    prof = rearrangement(f)
    maxp = MaximalProfile(prof)
    out = []
    for k, (a, b, v) in enumerate(prof.pieces()):
        lo, hi = _fl(a), min(_fl(b), phi.L)
        if k == 0:
            s, where = phi.sup_on(0.0, hi)
            out.append(PieceSup(lo, hi, _fl(v) * s, where, "exact-piece"))
        else:
            s, where, method = _maximal_piece_sup(phi, lo, hi, _fl(maxp.cumulative[k]), _fl(v), policy)
            out.append(PieceSup(lo, hi, s, where, method))
    tk = _fl(prof.support)
    if prof.values and tk < phi.L:
        s, where = phi.sup_ratio_on(tk, phi.L)
        out.append(PieceSup(tk, phi.L, _fl(maxp.total) * s, where, "exact-piece"))
    return out


def norm_M_phi(f: StepFunction, phi: PhiLike, policy: NumericPolicy = DEFAULT_POLICY,
               via_majorant: bool = False) -> NormResult:
    """``sup_t phi(t) f**(t)``.

    By default the supremum is taken against ``phi`` itself; with
    ``via_majorant=True`` it is taken against the least quasiconcave
    majorant, which has the same M-norm whenever ``phi`` is admissible.
    """
    if via_majorant:
        phi = majorant(phi)
    sups = fss_piece_sups(f, phi, policy)
    if not sups:
        return NormResult(0.0, None, "exact-piece", 0.0)
    best = max(sups, key=lambda p: p.sup)
    method = "refined-sup" if any(p.method == "refined-sup" for p in sups) else "exact-piece"
    return NormResult(best.sup, best.where, method, policy.tol_rel if method == "refined-sup" else 0.0)


def norm(f: StepFunction, phi: PhiLike, which: str, policy: NumericPolicy = DEFAULT_POLICY) -> NormResult:
    if which == "m":
        return norm_m_phi(f, phi, policy)
    if which == "M":
        return norm_M_phi(f, phi, policy)
    raise DomainError(f"unknown quasinorm {which!r}")


def l1_norm(f: StepFunction) -> float:
    return _fl(f.integral())


@dataclass(frozen=True)
class MajorantIdentityReport:
    norm_M: float
    norm_M_majorant: float
    norm_m: float
    norm_m_majorant: float
    C_phi: Optional[float]
    M_identity_ok: bool
    m_sandwich_ok: Optional[bool]

    @property
    def ok(self) -> bool:
        return self.M_identity_ok and self.m_sandwich_ok is not False

    def to_json(self) -> dict:
        return dict(self.__dict__)


def verify_majorant_identities(f: StepFunction, phi: PhiLike, policy: NumericPolicy = DEFAULT_POLICY,
                               rel_tol: float = 1e-6, C_phi: Optional[float] = None) -> MajorantIdentityReport:
    """Compare M-norms against ``phi`` and its majorant, and sandwich the m-norms.

    The m-sandwich ``C_phi ||f||_{m,phi~} <= ||f||_{m,phi} <= ||f||_{m,phi~}`` is
    skipped (reported as ``None``) when ``phi`` is not almost quasiconcave.
    """
    maj = majorant(phi)
    nM = norm_M_phi(f, phi, policy).value
    nMt = norm_M_phi(f, maj, policy).value
    nm = norm_m_phi(f, phi, policy).value
    nmt = norm_m_phi(f, maj, policy).value
    if C_phi is None:
        C_phi = almost_quasiconcave_constant(phi, policy)
    m_ok = None
    if C_phi is not None:
        m_ok = C_phi * nmt <= nm * (1 + rel_tol) and nm <= nmt * (1 + rel_tol)
    M_ok = abs(nM - nMt) <= rel_tol * max(nMt, 1e-300)
    return MajorantIdentityReport(nM, nMt, nm, nmt, C_phi, M_ok, m_ok)


def quasinorm_constant_Y(phi: PhiLike, which: str, policy: NumericPolicy = DEFAULT_POLICY,
                         mode: str = "delta2") -> float:
    """Constant in the quasi-triangle inequality.

    ``M``: 1 (always a norm).  ``m``: the doubling constant of ``phi``
    (``mode="delta2"``) or ``2/C_phi`` for almost quasiconcave ``phi``
    (``mode="almost_quasiconcave"``); ``inf`` if unavailable.
    """
    if which == "M":
        try:
            majorant(phi)
        except NonAdmissibleError:
            return INF
        return 1.0
    if which != "m":
        raise DomainError(f"unknown quasinorm {which!r}")
    if mode == "delta2":
        return delta2_constant(phi, policy)
    if mode == "almost_quasiconcave":
        c = almost_quasiconcave_constant(phi, policy)
        return INF if c is None else 2.0 / c
    raise DomainError(f"unknown mode {mode!r}")


def norm_sweep_csv(rows: list[tuple[int, float]]) -> str:
    """CSV table with columns ``m,norm``."""
    return csv_text(["m", "norm"], rows)
