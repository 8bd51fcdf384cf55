"""Checker for the general lower bound on the ball measure of noncompactness.

A certificate fixes ``tau``, a set ``S`` and a claimed bound ``r``; a
witness generator answers every ``(sigma, eps)`` with disjoint sets ``E_i``
and functions ``f_i``.  The checker computes ``sigma`` from the contradiction
threshold for each number ``k`` of covering centres and tests the four
conditions literally, then re-runs the pigeonhole step on simulated centre
assignments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional, Sequence

import numpy as np

from ..errors import DomainError, NonAdmissibleError, SchemaError
from ..norms import norm_M_phi, norm_m_phi
from ..numerics import DEFAULT_POLICY, NumericPolicy
from ..phi import (PhiLike, almost_quasiconcave_constant, is_admissible, phi_from_json,
                   sigma_threshold)
from ..reporting import SCHEMA_VERSION
from ..stepfn import StepFunction
from .certificates import Verdict, failed, passed
from .packing import Packing, PiMeasure, build_packing, unit_ball_volume, verify_packing

CONDITIONS = ("unit_ball", "large_measure", "uniform_bound_from_below", "large_marc_norm")


@dataclass(frozen=True)
class WitnessBatch:
    """``count`` members sharing one set measure, value ``s`` and attested X-norm."""

    count: int
    measure: PiMeasure
    s: float
    x_norm: float


@dataclass(frozen=True)
class Witness:
    batches: tuple[WitnessBatch, ...]
    packing: Optional[Packing] = None

    @property
    def m(self) -> int:
        return sum(b.count for b in self.batches)

    def members(self):
        """``(first_index, batch)`` pairs."""
        i = 0
        for b in self.batches:
            yield i, b
            i += b.count


@dataclass(frozen=True)
class GeneralLowerCertificate:
    case: str  # "m_phi" or "M_phi"
    tau: PiMeasure
    S_measure: PiMeasure
    r: float
    normT: float
    phi: PhiLike
    generator: str
    generator_params: dict = field(default_factory=dict)
    t0: Optional[float] = None
    C_phi: Optional[float] = None

    def __post_init__(self):
        if self.case not in ("m_phi", "M_phi"):
            raise DomainError(f"unknown case {self.case!r}")
        object.__setattr__(self, "tau", PiMeasure.parse(self.tau) if isinstance(self.tau, str) else PiMeasure.of(self.tau))
        object.__setattr__(self, "S_measure", PiMeasure.parse(self.S_measure) if isinstance(self.S_measure, str)
                           else PiMeasure.of(self.S_measure))
        if self.case == "m_phi" and self.t0 is None:
            raise DomainError("the weak-type case needs t0")

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "kind": "general", "case": self.case,
                "tau": str(self.tau), "S_measure": str(self.S_measure), "r": self.r,
                "normT": self.normT, "phi": self.phi.to_json(), "t0": self.t0, "C_phi": self.C_phi,
                "generator": {"name": self.generator, "params": dict(sorted(self.generator_params.items()))}}


def general_certificate_from_json(doc: dict) -> GeneralLowerCertificate:
    try:
        if doc.get("schema_version") != SCHEMA_VERSION:
            raise SchemaError(f"unsupported schema_version {doc.get('schema_version')!r}")
        gen = doc["generator"]
        return GeneralLowerCertificate(
            case=doc["case"], tau=str(doc["tau"]), S_measure=str(doc["S_measure"]),
            r=float(doc["r"]), normT=float(doc["normT"]), phi=phi_from_json(doc["phi"]),
            generator=gen["name"], generator_params=dict(gen.get("params", {})),
            t0=None if doc.get("t0") is None else float(doc["t0"]),
            C_phi=None if doc.get("C_phi") is None else float(doc["C_phi"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad certificate document: {exc}") from exc


# ---------------------------------------------------------------------------
# witness generators
# ---------------------------------------------------------------------------

Generator = Callable[[GeneralLowerCertificate, float, float, NumericPolicy], Witness]
GENERATORS: dict[str, Generator] = {}


def register_generator(name: str):
    def deco(fn: Generator) -> Generator:
        GENERATORS[name] = fn
        return fn
    return deco


@register_generator("indicator_packing")
def indicator_packing(cert: GeneralLowerCertificate, sigma: float, eps: float,
                      policy: NumericPolicy = DEFAULT_POLICY) -> Witness:
    """Normalised indicators ``f_i = c chi_{E_i}/phi(mu(E_i))`` on a dyadic ball packing.

    ``E_i`` are the balls of one packing of the cube ``S`` with ``t1`` at the
    lower end of its level, so ``sum mu(E_i) = tau mu(S)`` exactly.  For the
    identity embedding ``s_i = c/phi(mu(E_i))`` in both cases.

    Parameters (for building deliberately broken certificates as well):
    ``n``, ``side``, ``value_factor`` (``c``), ``x_norm`` (attested X-norm
    override), ``keep_fraction`` (drop members), ``fixed_level`` (ignore sigma).
    """
    p = cert.generator_params
    n = int(p.get("n", 1))
    side = Fraction(str(p.get("side", 1)))
    c = float(p.get("value_factor", 1.0))
    phi = cert.phi
    b0 = unit_ball_volume(n) * (side / 2) ** n
    level = p.get("fixed_level")
    j = 1 if level is None else int(level) + 1
    while True:
        t1 = b0 / 2 ** (n * j)
        tf = float(t1)
        ok_t0 = cert.t0 is None or tf < cert.t0
        if level is not None or (ok_t0 and tf < phi.L and c / phi(tf) >= sigma):
            break
        j += 1
        if j > 4096:
            raise DomainError("no admissible set measure found")
    pack = build_packing(n, t1, side)
    count = pack.m
    keep = Fraction(str(p.get("keep_fraction", 1)))
    if keep < 1:
        count = max(1, math.floor(count * keep))
    if "x_norm" in p:
        x_norm = float(p["x_norm"])
    else:
        f = StepFunction.from_values([1.0 / phi(tf)], [Fraction(tf)], phi.L)
        x_norm = (norm_m_phi(f, phi, policy) if cert.case == "m_phi" else norm_M_phi(f, phi, policy)).value
    return Witness((WitnessBatch(count, t1, c / phi(tf), x_norm),), pack)


# ---------------------------------------------------------------------------
# pigeonhole step
# ---------------------------------------------------------------------------

def _balanced_counts(count: int, k: int, loads: list[int]) -> list[int]:
    base, rem = divmod(count, k)
    order = sorted(range(k), key=lambda j: (loads[j], j))
    return [base + (1 if j in set(order[:rem]) else 0) for j in range(k)]


def pigeonhole_max_bucket(w: Witness, k: int, rng: Optional[np.random.Generator] = None) -> PiMeasure | float:
    """Largest bucket measure when the members are spread over ``k`` centres.

    Without ``rng`` the spread is as even as possible (the adversary's best
    attempt); with ``rng`` each member picks a centre uniformly at random.
    """
    loads = [0] * k
    buckets: list[Any] = [PiMeasure(0)] * k
    for _, b in w.members():
        if rng is None:
            counts = _balanced_counts(b.count, k, loads)
        else:
            counts = [int(x) for x in rng.multinomial(b.count, [1.0 / k] * k)]
        for j in range(k):
            loads[j] += counts[j]
            try:
                buckets[j] = buckets[j] + b.measure * counts[j]
            except DomainError:
                buckets[j] = float(buckets[j]) + float(b.measure) * counts[j]
    return max(buckets, key=float)


# ---------------------------------------------------------------------------
# checker
# ---------------------------------------------------------------------------

def _ratio_nonincreasing_below(phi: PhiLike, t0: float, policy: NumericPolicy) -> bool:
    lo = t0 * 2.0 ** (-policy.depth)
    ts = np.union1d(np.geomspace(lo, t0, 8 * policy.depth),
                    [b for b in phi.breakpoints() if lo < b < t0])
    r = phi.values(ts) / ts
    return bool(np.all(np.diff(r) <= policy.tol_rel * np.abs(r[:-1])))


def verify_general_lower_certificate(cert: GeneralLowerCertificate, k_max: int = 8,
                                     eps_list: Sequence[float] = (0.5, 0.1, 0.01),
                                     policy: NumericPolicy = DEFAULT_POLICY, seed: int = 0,
                                     random_trials: int = 2) -> Verdict:
    """Verdict ``PASS`` certifies ``alpha(T) >= r``; otherwise the first violated condition.

    ``r == normT`` is accepted: the conclusion holds for every smaller ``r``
    and the measure of noncompactness is a closed condition.
    """
    r, phi = cert.r, cert.phi
    if not 0 < r <= cert.normT:
        return failed(r, "bound_below_norm", detail=f"need 0 < r <= normT, got r={r}")
    C_phi = 1.0
    if cert.case == "m_phi":
        C_phi = cert.C_phi if cert.C_phi is not None else almost_quasiconcave_constant(phi, policy)
        if C_phi is None:
            return failed(r, "almost_quasiconcave", detail="phi is not almost quasiconcave")
        if not 0 < cert.t0 < phi.L:
            return failed(r, "t0", detail="t0 must lie in (0, L)")
        if not _ratio_nonincreasing_below(phi, cert.t0, policy):
            return failed(r, "ratio_nonincreasing_below_t0")
    elif not is_admissible(phi):
        return failed(r, "admissible", detail="phi is not admissible")
    gen = GENERATORS.get(cert.generator)
    if gen is None:
        return failed(r, "generator", detail=f"unknown witness generator {cert.generator!r}")
    case = "m" if cert.case == "m_phi" else "M"
    tol = policy.tol_rel
    trace = []
    for eps in eps_list:
        for k in range(1, k_max + 1):
            sigma = sigma_threshold(phi, case, eps, float(cert.tau), float(cert.S_measure), k,
                                    cert.normT, r, C_phi, policy)
            w = gen(cert, sigma, eps, policy)
            ctx = {"eps": eps, "k": k}
            margins = []

            def fail(name, index=None, detail=""):
                trace.append({**ctx, "sigma": sigma, "m": w.m, "margins": margins})
                return failed(r, name, index, detail, ctx, trace)

            if w.packing is not None:
                rep = verify_packing(w.packing)
                if not rep.ok:
                    return fail("disjoint", detail=rep.first_failure.detail or rep.first_failure.name)
                if w.packing.Q_measure != cert.S_measure:
                    return fail("inside_S", detail="packing cube is not S")
                if any(b.count > w.packing.m for b in w.batches) or len(w.batches) != 1:
                    return fail("disjoint", detail="members exceed the packing")
            else:
                return fail("disjoint", detail="witness carries no disjointness proof")
            for i, b in w.members():
                if not b.measure > 0:
                    return fail("positive_measure", i)
                if cert.case == "m_phi" and not float(b.measure) < cert.t0:
                    return fail("t0", i, f"mu(E_i)={b.measure} >= t0")
            # (i)
            for i, b in w.members():
                if abs(b.x_norm - 1.0) > tol:
                    return fail("unit_ball", i, f"||f_i||_X = {b.x_norm}")
            margins.append(("unit_ball", max(abs(b.x_norm - 1.0) for b in w.batches)))
            # (ii)
            total = PiMeasure(0)
            for _, b in w.members():
                total = total + b.measure * b.count
            need = cert.tau * cert.S_measure
            margins.append(("large_measure", float(total) - float(need)))
            if not total >= need:
                return fail("large_measure", None, f"sum mu(E_i) = {total} < {need}")
            # (iii)
            for i, b in w.members():
                if not b.s >= sigma:
                    return fail("uniform_bound_from_below", i, f"s_i = {b.s} < sigma = {sigma}")
            margins.append(("uniform_bound_from_below", min(b.s for b in w.batches) - sigma))
            # (iv)
            target = (1 - eps) * r
            worst = None
            for i, b in w.members():
                val = b.s * phi(float(b.measure))
                worst = val if worst is None else min(worst, val)
                if val < target * (1 - tol):
                    return fail("large_marc_norm", i, f"s_i phi(mu(E_i)) = {val} < {target}")
            margins.append(("large_marc_norm", worst - target))
            # pigeonhole: some centre collects at least tau mu(S)/k
            share = need / k
            rng = np.random.default_rng(seed)
            for trial in range(random_trials + 1):
                best = pigeonhole_max_bucket(w, k, None if trial == 0 else rng)
                ok = best >= share if isinstance(best, PiMeasure) else best >= float(share) * (1 - tol)
                if not ok:
                    return fail("pigeonhole", None, f"max bucket {best} < {share}")
                if trial == 0:
                    margins.append(("pigeonhole", float(best) - float(share)))
            trace.append({**ctx, "sigma": sigma, "m": w.m, "margins": margins})
    return passed(r, trace, f"alpha(T) >= {r}")
