"""Equimeasurable-family criterion: family checks and the explicit proof parameters."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ..errors import DomainError, NonAdmissibleError, OverlapError, PreconditionError
from ..norms import norm_M_phi, norm_m_phi
from ..numerics import DEFAULT_POLICY, NumericPolicy, log_refined_min
from ..phi import (PhiLike, delta2_constant, dilation_condition_value, dilation_sup, is_admissible,
                   majorant, margin_growth_exponent, not_too_constant_margin)
from ..reporting import SCHEMA_VERSION
from ..stepfn import StepFunction, disjoint_sum, rearrangement
from .certificates import Verdict, failed, passed

GROWTH_EXPONENT_MIN = 1e-3
N_CAP = 2 ** 48


@dataclass(frozen=True)
class WitnessParams:
    case: str  # "m" or "M"
    subcase: str  # "C1", "C2", "C3" or "inconclusive"
    normT: float
    lam: float
    m_centers: int
    r: float
    eps: float
    theta: float
    N: int
    gamma: float
    a: float
    M: int
    C: float
    beta0: Optional[float] = None
    alpha0: Optional[float] = None

    def to_json(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class ParamCheck:
    name: str
    ok: bool
    lhs: float
    rhs: float


def _domain_length(phi: PhiLike) -> float:
    return phi.L


def _linear_near_zero(phi: PhiLike, policy: NumericPolicy) -> Optional[float]:
    """Largest ``L 2^-j`` below which ``phi~(t)/t`` is constant, if any."""
    maj = majorant(phi)
    L = phi.L
    ts = L * 2.0 ** -np.arange(1, policy.depth + 1)
    ratio = maj.values(ts) / ts
    deep = ratio[-1]
    close = np.abs(ratio - deep) <= 1e-12 * abs(deep)
    if not close[-1]:
        return None
    j0 = len(close) - 1
    while j0 > 0 and close[j0 - 1]:
        j0 -= 1
    if j0 > len(close) - 8:
        return None
    return float(ts[j0])


def _margin_inf(phi: PhiLike, factor: float, policy: NumericPolicy) -> float:
    """Smaller of the refined infimum and a dense geometric-grid infimum."""
    refined = not_too_constant_margin(phi, factor, policy)
    hi = phi.scan_limit(policy) / factor
    ts = np.geomspace(hi * 2.0 ** (-policy.depth), hi, 20_000)
    with np.errstate(divide="ignore", invalid="ignore"):
        grid = float(np.nanmin(phi.values(factor * ts) / phi.values(ts)))
    return min(refined, grid)


def _dilation_max(phi: PhiLike, theta: float, policy: NumericPolicy) -> float:
    top = phi.scan_limit(policy)
    ts = np.geomspace(top * 2.0 ** (-policy.depth), top, 20_000)
    with np.errstate(divide="ignore", invalid="ignore"):
        grid = float(np.nanmax(phi.values(ts) / phi.values(theta * ts)))
    return max(dilation_sup(phi, theta, policy), grid)


def _smallest_N(phi: PhiLike, theta: float, threshold: float, policy: NumericPolicy) -> int:
    ok = lambda N: N * (1 - theta) > 1 and not_too_constant_margin(phi, N * (1 - theta), policy) > threshold  # noqa: E731
    N = max(2, math.floor(1 / (1 - theta)) + 1)
    lo = N - 1
    while not ok(N):
        lo = N
        N *= 2
        if N > N_CAP:
            raise PreconditionError(f"the margin of phi never clears {threshold} below N = {N_CAP}")
    hi = N
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    N = hi
    while _margin_inf(phi, N * (1 - theta), policy) <= threshold:  # guard against grid disagreement
        N += 1
    return N


def alt_witness_params(phi: PhiLike, case: str, normT: float, lam: float, m_centers: int,
                       policy: NumericPolicy = DEFAULT_POLICY, r: Optional[float] = None,
                       eps: Optional[float] = None) -> WitnessParams:
    """Parameters ``(r, eps, theta, N, a, M)`` used against ``m_centers`` covering centres.

    Defaults ``r = 3 lam/4`` and ``eps = lam/16`` give ``r + 2 eps < lam``.
    """
    if not 0 < lam <= normT:
        raise DomainError("need 0 < lam <= normT")
    if m_centers < 1:
        raise DomainError("need at least one centre")
    r = 0.75 * lam if r is None else float(r)
    eps = lam / 16 if eps is None else float(eps)
    if not (r > 0 and eps > 0 and r + 2 * eps < lam):
        raise DomainError("need r, eps > 0 with r + 2 eps < lam")
    L = phi.L
    beta0 = alpha0 = None
    gamma = 1.0
    if case == "m":
        C = delta2_constant(phi, policy)
        if not math.isfinite(C):
            raise PreconditionError("phi fails the doubling condition")
        theta = None
        for j in range(1, 60):
            th = 1.0 - 2.0 ** (-j)
            if dilation_sup(phi, th, policy) <= 1 + eps / r:
                theta = th
                break
        if theta is None:
            raise PreconditionError("no dilation parameter satisfies the bound")
        subcase = "C1"
    elif case == "M":
        if not is_admissible(phi):
            raise PreconditionError("phi is not admissible")
        C, theta = 1.0, 0.0
        if not math.isfinite(L):
            subcase = "C1"
        else:
            alpha0 = _linear_near_zero(phi, policy)
            subcase = "C3" if alpha0 is not None else "C2"
    else:
        raise DomainError(f"unknown case {case!r}")
    if subcase == "C3":
        N = max(2, math.floor(L / alpha0) + 1, math.floor(2 * normT / eps) + 1)
    else:
        N = _smallest_N(phi, theta, 2 * C * normT / eps, policy)
    if subcase == "C2":
        maj = majorant(phi)
        alpha = L / N
        base = maj(alpha) / alpha
        for j in range(1, 200):
            b = alpha / 2 ** j
            if maj(b) / b > base * (1 + 1e-12):
                beta0, gamma = b, float(2 ** j)
                break
        else:
            subcase = "inconclusive"
    a = min(L, 1.0) / (gamma * N ** 2 * (1 - theta))
    return WitnessParams(case, subcase, normT, lam, m_centers, r, eps, theta, N, gamma, a,
                         m_centers * N, C, beta0, alpha0)


def verify_witness_params(phi: PhiLike, p: WitnessParams,
                          policy: NumericPolicy = DEFAULT_POLICY) -> list[ParamCheck]:
    """Re-evaluate every inequality the parameters are supposed to satisfy."""
    L = phi.L
    out = [ParamCheck("r_eps_order", p.r > 0 and p.eps > 0 and p.r + 2 * p.eps < p.lam,
                      p.r + 2 * p.eps, p.lam)]
    if p.case == "m":
        d = _dilation_max(phi, p.theta, policy)
        out.append(ParamCheck("dilation_theta", 0 < p.theta < 1 and d <= 1 + p.eps / p.r, d, 1 + p.eps / p.r))
    else:
        out.append(ParamCheck("theta_zero", p.theta == 0.0, p.theta, 0.0))
    if p.subcase == "C3":
        out.append(ParamCheck("identity_case_N_measure", L / p.N < p.alpha0, L / p.N, p.alpha0))
        out.append(ParamCheck("identity_case_N_norm", p.N >= 2 and p.N > 2 * p.normT / p.eps,
                              p.N, 2 * p.normT / p.eps))
        maj = majorant(phi)
        ts = np.geomspace(p.alpha0 * 2.0 ** -64, p.alpha0, 200)
        ratio = maj.values(ts) / ts
        ref = maj.values(np.array([p.alpha0]))[0] / p.alpha0
        dev = float(np.max(np.abs(ratio - ref))) / ref
        out.append(ParamCheck("identity_case_constant_ratio", dev <= 1e-9, dev, 1e-9))
    else:
        factor = p.N * (1 - p.theta)
        thr = 2 * p.C / p.eps * p.normT
        ok = factor > 1
        val = _margin_inf(phi, factor, policy) if ok else float("nan")
        out.append(ParamCheck("not_too_constant_N", ok and val > thr, val, thr))
    if p.subcase == "C2":
        maj = majorant(phi)
        alpha = L / p.N
        lhs, rhs = maj(p.beta0) / p.beta0, maj(alpha) / alpha
        out.append(ParamCheck("non_identity_jump", 0 < p.beta0 < alpha and lhs > rhs, lhs, rhs))
        out.append(ParamCheck("beta0_gamma", p.gamma > 1 and math.isclose(p.beta0, L / (p.gamma * p.N), rel_tol=1e-12),
                              p.beta0, L / (p.gamma * p.N)))
    else:
        out.append(ParamCheck("gamma_one", p.gamma == 1.0, p.gamma, 1.0))
    cap = min(L, 1.0) / (p.N * (1 - p.theta))
    formula = min(L, 1.0) / (p.gamma * p.N ** 2 * (1 - p.theta))
    out.append(ParamCheck("a_small_enough", math.isclose(p.a, formula, rel_tol=1e-12) and p.a <= cap, p.a, cap))
    out.append(ParamCheck("M_equals_mN", p.M == p.m_centers * p.N, p.M, p.m_centers * p.N))
    return out


# ---------------------------------------------------------------------------
# family certificate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AltCertificate:
    case: str  # "m_phi" or "M_phi"
    lam: float
    normT: float
    a: Fraction
    family: tuple[StepFunction, ...]
    phi: PhiLike

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "kind": "alt", "case": self.case, "lambda": self.lam,
                "normT": self.normT, "a": str(self.a), "phi": self.phi.to_json(),
                "family": [f.to_json() for f in self.family]}


def translated_family(base: StepFunction, count: int, spacing) -> tuple[StepFunction, ...]:
    """``count`` copies of ``base`` shifted by multiples of ``spacing``."""
    spacing = Fraction(spacing)
    return tuple(base.translated(spacing * j) for j in range(count))


def alt_certificate_check(cert: AltCertificate, policy: NumericPolicy = DEFAULT_POLICY,
                          m_centers: Optional[int] = None) -> Verdict:
    """Verdict ``PASS`` certifies ``alpha(T) >= lambda``.

    With ``m_centers`` the family must also be large enough (``M``) and its
    supports small enough (``a``) for the parameters defeating that many centres.
    """
    lam, phi = cert.lam, cert.phi
    if not 0 < lam <= cert.normT:
        return failed(lam, "bound_below_norm")
    growth = margin_growth_exponent(phi, policy)
    if not growth > GROWTH_EXPONENT_MIN:
        return failed(lam, "not_too_constant", detail=f"margin growth exponent {growth:.3g}")
    if cert.case == "m_phi":
        c = delta2_constant(phi, policy)
        if not math.isfinite(c):
            return failed(lam, "delta2")
        d = dilation_condition_value(phi, policy)
        if d > 1 + policy.tol_rel:
            return failed(lam, "dilation", detail=f"inf_theta sup phi(t)/phi(theta t) = {d}")
    elif cert.case == "M_phi":
        if not is_admissible(phi):
            return failed(lam, "admissible")
    else:
        return failed(lam, "case", detail=f"unknown case {cert.case!r}")
    fam = cert.family
    if not fam:
        return failed(lam, "family_size", detail="empty family")
    try:
        disjoint_sum([f.layout() for f in fam])
    except OverlapError as exc:
        return failed(lam, "disjoint", exc.pair[1], str(exc))
    for j, f in enumerate(fam):
        if f.support_measure() > cert.a:
            return failed(lam, "small_support", j, f"mu(spt) = {f.support_measure()} > a = {cert.a}")
    ref = rearrangement(fam[0])
    for j, f in enumerate(fam[1:], start=1):
        if rearrangement(f) != ref:
            return failed(lam, "equimeasurable", j)
    # equimeasurable members share every rearrangement-invariant norm
    value = (norm_m_phi if cert.case == "m_phi" else norm_M_phi)(fam[0], phi, policy).value
    if value < lam * (1 - policy.tol_rel):
        return failed(lam, "extremality", 0, f"||Tf_j||_Y = {value} < {lam}")
    trace = [{"growth_exponent": growth, "norm": value, "members": len(fam)}]
    if m_centers is not None:
        p = alt_witness_params(phi, "m" if cert.case == "m_phi" else "M", cert.normT, lam * (1 - 1e-12)
                               if lam == cert.normT else lam, m_centers, policy)
        if len(fam) < p.M:
            return failed(lam, "family_size", detail=f"{len(fam)} < M = {p.M}")
        if float(cert.a) > p.a:
            return failed(lam, "support_cap", detail=f"a = {cert.a} > {p.a}")
        trace.append({"N": p.N, "M": p.M, "a": p.a, "subcase": p.subcase})
    return passed(lam, trace, f"alpha(T) >= {lam}")


def alt_certificate_from_json(doc: dict) -> AltCertificate:
    from ..errors import SchemaError
    from ..phi import phi_from_json
    from ..stepfn import step_from_json
    try:
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise SchemaError(f"unsupported schema_version {doc.get('schema_version')!r}")
        return AltCertificate(doc["case"], float(doc["lambda"]), float(doc["normT"]), Fraction(str(doc["a"])),
                              tuple(step_from_json(f) for f in doc["family"]), phi_from_json(doc["phi"]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"bad certificate document: {exc}") from exc
