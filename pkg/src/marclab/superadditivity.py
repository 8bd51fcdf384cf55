"""Extremal families showing that Marcinkiewicz quasinorms are not disjointly superadditive.

A family consists of indicators ``f_k = chi_{E_k}/phi(r_k)`` with
``mu(E_k) = r_k`` and rapidly decreasing radii.  Each member has norm 1,
while the norm of the sum stays bounded, so ``sum ||f_k||^gamma`` grows
linearly in ``m`` against a bounded ``||f||^gamma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DomainError, PreconditionError
from .norms import fss_piece_sups, norm_M_phi, norm_m_phi, l1_norm
from .numerics import DEFAULT_POLICY, NumericPolicy
from .phi import (PhiLike, delta2_constant, is_nondecreasing, limit_t_over_phi,
                  ratio_is_nonincreasing)
from .reporting import csv_text
from .stepfn import Piece, StepFunction, disjoint_sum

DEFAULT_GAMMAS = (0.5, 1.0, 2.0)
MAX_HALVINGS = 200


@dataclass(frozen=True)
class CounterexampleFamily:
    case: str  # "m_phi" or "M_phi"
    radii: tuple[Fraction, ...]
    functions: tuple[StepFunction, ...]
    total: StepFunction
    t0: Optional[float] = None

    @property
    def m(self) -> int:
        return len(self.radii)

    @property
    def tails(self) -> tuple[Fraction, ...]:
        """``a_k = r_{k+1} + ... + r_m`` for ``k = 0..m`` (so ``a_m = 0``)."""
        out, acc = [], Fraction(0)
        for r in reversed(self.radii):
            out.append(acc)
            acc += r
        out.append(acc)
        return tuple(reversed(out))

    def to_json(self) -> dict:
        return {"case": self.case, "m": self.m, "radii": [str(r) for r in self.radii],
                "tails": [str(a) for a in self.tails], "t0": self.t0,
                "functions": [f.to_json() for f in self.functions], "sum": self.total.to_json()}


def _build(case: str, phi: PhiLike, radii: Sequence[Fraction], t0: Optional[float]) -> CounterexampleFamily:
    fam_radii = tuple(radii)
    tails, acc = [], Fraction(0)
    for r in reversed(fam_radii):
        tails.append(acc)
        acc += r
    tails.reverse()  # tails[k] = a_{k+1} in 1-based terms: start of E_{k+1}
    fs = []
    for r, a in zip(fam_radii, tails):
        # E_k = [a_k, a_{k-1}), so the sum is already nonincreasing
        fs.append(StepFunction((Piece(1.0 / phi(float(r)), r, (a, a + r)),), phi.L))
    total = disjoint_sum(fs)
    return CounterexampleFamily(case, fam_radii, tuple(fs), total, t0)


def _start_radius(phi: PhiLike, t0: Optional[float]) -> Fraction:
    cap = phi.L if t0 is None else min(float(t0), phi.L)
    if not math.isfinite(cap):
        cap = 1.0
    return Fraction(cap) / 2


def gen_counterexample_m(phi: PhiLike, m: int, t0: Optional[float] = None,
                         policy: NumericPolicy = DEFAULT_POLICY) -> CounterexampleFamily:
    """Family for the weak-type space: ``r_1 = min(t0, L)/2`` and ``r_k = r_1 2^{1-k}``."""
    if m < 1:
        raise DomainError("family size must be positive")
    if is_nondecreasing(phi, policy) is not True:
        raise PreconditionError("phi fails the nondecreasing check")
    r1 = _start_radius(phi, t0)
    radii = [r1 / 2 ** k for k in range(m)]
    return _build("m_phi", phi, radii, t0)


def gen_counterexample_M(phi: PhiLike, m: int, r1: Optional[float] = None,
                         policy: NumericPolicy = DEFAULT_POLICY) -> CounterexampleFamily:
    """Family for the maximal-function space.

    Radii halve until both ``r_{k+1} <= r_k/2`` and
    ``r_{k+1}/phi(r_{k+1}) <= r_k/(2 phi(r_k))`` hold.
    """
    if m < 1:
        raise DomainError("family size must be positive")
    limit = limit_t_over_phi(phi)
    if limit == "positive_finite":
        raise PreconditionError(
            "lim t/phi(t) at 0+ is positive and finite: M_phi coincides with L1 up to equivalent "
            "norms and is disjointly superadditive, so no counterexample exists")
    if limit != "zero":
        raise PreconditionError(f"lim t/phi(t) at 0+ is {limit}, expected zero")
    if is_nondecreasing(phi, policy) is not True or ratio_is_nonincreasing(phi, policy) is not True:
        raise PreconditionError("phi is not quasiconcave")
    radii = [_start_radius(phi, None) if r1 is None else Fraction(r1)]
    for _ in range(m - 1):
        prev = radii[-1]
        target = float(prev) / (2 * phi(float(prev)))
        nxt = prev / 2
        for _ in range(MAX_HALVINGS):
            if float(nxt) / phi(float(nxt)) <= target:
                break
            nxt /= 2
        else:
            raise PreconditionError(f"no admissible radius after {MAX_HALVINGS} halvings")
        radii.append(nxt)
    return _build("M_phi", phi, radii, None)


@dataclass(frozen=True)
class DefectReport:
    gamma: float
    member_norms: tuple[float, ...]
    sum_norm: float
    defect: float
    bound: float

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _family_norm(fam: CounterexampleFamily, f: StepFunction, phi: PhiLike, policy: NumericPolicy) -> float:
    if fam.case == "m_phi":
        return norm_m_phi(f, phi, policy).value
    return norm_M_phi(f, phi, policy).value


def superadditivity_defect(fam: CounterexampleFamily, phi: PhiLike, gamma: float = 1.0,
                           policy: NumericPolicy = DEFAULT_POLICY,
                           member_norms: Optional[Sequence[float]] = None,
                           sum_norm: Optional[float] = None) -> DefectReport:
    """``sum ||f_k||^gamma / ||f||^gamma`` together with its theoretical lower bound.

    The bound is ``m / c^gamma`` (``c`` the doubling constant of ``phi``) for
    the weak-type family and ``m / 4^gamma`` for the maximal one.
    """
    if not gamma > 0:
        raise DomainError("gamma must be positive")
    norms = tuple(member_norms) if member_norms is not None else tuple(
        _family_norm(fam, f, phi, policy) for f in fam.functions)
    total = sum_norm if sum_norm is not None else _family_norm(fam, fam.total, phi, policy)
    defect = sum(n ** gamma for n in norms) / total ** gamma
    if fam.m == 1:
        bound = 1.0
    elif fam.case == "m_phi":
        bound = fam.m / delta2_constant(phi, policy) ** gamma
    else:
        bound = fam.m / 4.0 ** gamma
    return DefectReport(gamma, norms, total, defect, bound)


def defect_sweep(phi: PhiLike, case: str, ms: Sequence[int], gammas: Sequence[float] = DEFAULT_GAMMAS,
                 t0: Optional[float] = None, policy: NumericPolicy = DEFAULT_POLICY) -> list[tuple]:
    """Rows ``(m, gamma, sum_norm, defect)`` for every ``m`` and ``gamma``."""
    rows = []
    for m in ms:
        fam = gen_counterexample_m(phi, m, t0, policy) if case == "m" else gen_counterexample_M(phi, m, policy=policy)
        norms = [_family_norm(fam, f, phi, policy) for f in fam.functions]
        total = _family_norm(fam, fam.total, phi, policy)
        for g in gammas:
            rep = superadditivity_defect(fam, phi, g, policy, norms, total)
            rows.append((m, g, rep.sum_norm, rep.defect))
    return rows


def defect_csv(rows: Sequence[tuple]) -> str:
    return csv_text(["m", "gamma", "sum_norm", "defect"], rows)


@dataclass(frozen=True)
class FamilyCheck:
    name: str
    ok: bool
    detail: str = ""


def family_invariants(fam: CounterexampleFamily, phi: PhiLike,
                      policy: NumericPolicy = DEFAULT_POLICY, tol: float = 1e-9) -> list[FamilyCheck]:
    """Every structural property the proofs use, evaluated on a generated family."""
    r = fam.radii
    a = fam.tails  # a[k] = r_{k+1} + ... + r_m, 0-based radii r[0..m-1]
    checks = [FamilyCheck("halving", all(r[k + 1] <= r[k] / 2 for k in range(fam.m - 1)))]
    try:
        disjoint_sum(list(fam.functions))
        checks.append(FamilyCheck("disjoint", True))
    except Exception as exc:  # OverlapError
        checks.append(FamilyCheck("disjoint", False, str(exc)))
    checks.append(FamilyCheck("total_measure", sum(r) <= 2 * r[0]))
    if fam.t0 is not None:
        checks.append(FamilyCheck("below_t0", float(r[0]) < fam.t0))
    if fam.case == "m_phi":
        c = delta2_constant(phi, policy)
        worst = max(phi.at(float(a[j])) / phi(float(r[j])) for j in range(fam.m))
        checks.append(FamilyCheck("doubling_ratio", worst <= c * (1 + tol), f"{worst} vs {c}"))
    else:
        ok = all(float(r[k + 1]) / phi(float(r[k + 1])) <= float(r[k]) / (2 * phi(float(r[k])))
                 for k in range(fam.m - 1))
        checks.append(FamilyCheck("ratio_condition", ok))
        sups = fss_piece_sups(fam.total, phi, policy)
        first = sups[0].sup  # piece (0, a_{m-1}]
        checks.append(FamilyCheck("innermost_sup_is_one", abs(first - 1) <= tol, repr(first)))
        worst = max(p.sup for p in sups)
        checks.append(FamilyCheck("piece_sups_at_most_4", worst <= 4 * (1 + tol), repr(worst)))
    return checks


@dataclass(frozen=True)
class L1EquivalenceReport:
    kappa1: float
    kappa2: float
    kappa1_bound: float
    kappa2_bound: float
    samples: int
    ok: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def l1_equivalence_check(phi: PhiLike, samples: Sequence[StepFunction],
                         policy: NumericPolicy = DEFAULT_POLICY, tol: float = 1e-9) -> L1EquivalenceReport:
    """Empirical constants in ``k1 ||f||_1 <= ||f||_M <= k2 ||f||_1``.

    Theoretical bounds: ``k1 >= lim_{t->L} phi(t)/t`` and ``k2 <= sup phi(t)/t``.
    """
    limit = limit_t_over_phi(phi)
    if limit != "positive_finite":
        raise PreconditionError(f"lim t/phi(t) at 0+ is {limit}; L1 equivalence needs a positive finite limit")
    ratios = []
    for f in samples:
        l1 = l1_norm(f)
        if l1 > 0:
            ratios.append(norm_M_phi(f, phi, policy).value / l1)
    if not ratios:
        raise DomainError("no nonzero samples")
    top = phi.scan_limit(policy)
    lo = top * 2.0 ** (-policy.depth)
    k2_bound = max(phi.sup_ratio_on(lo, phi.L)[0], phi.limit_zero() / lo if phi.limit_zero() > 0 else 0.0)
    k1_bound = phi.at(phi.L) / phi.L if phi.L < math.inf else phi.ratio_limit_infinity()
    k1, k2 = min(ratios), max(ratios)
    ok = k1 >= k1_bound * (1 - tol) and k2 <= k2_bound * (1 + tol)
    return L1EquivalenceReport(k1, k2, k1_bound, k2_bound, len(ratios), ok)
