"""Pigeonhole lower bound for embeddings into the space of bounded functions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from ..errors import DomainError, OverlapError
from ..reporting import SCHEMA_VERSION
from ..stepfn import Number, StepFunction, disjoint_sum, fmt_number, to_value
from .certificates import Verdict, failed, passed


def ell_for_centers(m: int) -> int:
    """Family size ``2^m`` that defeats every cover by ``m - 1`` balls."""
    if m < 1:
        raise DomainError("m must be positive")
    return 2 ** m


@dataclass(frozen=True)
class LinfCertificate:
    """Disjointly supported members of the unit ball with attested pairwise X-distances.

    ``r`` may be a fraction so that the strict sup-norm test is exact.
    """

    r: Number
    members: tuple[StepFunction, ...]
    x_norms: tuple[float, ...]
    pair_bounds: tuple[tuple[int, int, float], ...] = ()
    uniform_pair_bound: Optional[float] = None
    normI: Optional[float] = None

    @property
    def ell(self) -> int:
        return len(self.members)

    def pair_bound(self, i: int, j: int) -> Optional[float]:
        for a, b, v in self.pair_bounds:
            if {a, b} == {i, j}:
                return v
        return self.uniform_pair_bound

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "kind": "linf", "r": fmt_number(self.r), "normI": self.normI,
                "members": [f.to_json() for f in self.members], "x_norms": list(self.x_norms),
                "pair_bounds": [list(p) for p in self.pair_bounds],
                "uniform_pair_bound": self.uniform_pair_bound}


def linf_lower_certificate(cert: LinfCertificate) -> Verdict:
    """Verdict ``PASS`` certifies ``alpha(I) >= r``."""
    r = cert.r
    if cert.ell < 2:
        return failed(r, "family_size", detail="need at least two members")
    if not r > 0 or (cert.normI is not None and r > cert.normI):
        return failed(r, "bound_below_norm")
    if len(cert.x_norms) != cert.ell:
        return failed(r, "unit_ball", detail="one X-norm attestation per member is required")
    for i, x in enumerate(cert.x_norms):
        if x > 1:
            return failed(r, "unit_ball", i, f"||f_i||_X = {x}")
    try:
        disjoint_sum([f.layout() for f in cert.members])
    except OverlapError as exc:
        return failed(r, "disjoint", exc.pair[1], str(exc))
    for i in range(cert.ell):
        for j in range(i + 1, cert.ell):
            b = cert.pair_bound(i, j)
            if b is None or b > 1:
                return failed(r, "pairwise_distance", j, f"pair ({i}, {j}) bound {b}")
    for i, f in enumerate(cert.members):
        s = f.sup_norm()
        if not s > r:
            return failed(r, "sup_norm", i, f"||f_i||_inf = {s} is not > {r}")
    defeated = int(math.floor(math.log2(cert.ell))) - 1
    trace = [{"ell": cert.ell, "centers_defeated": defeated,
              "min_sup_norm": min(f.sup_norm() for f in cert.members)}]
    return passed(r, trace, f"alpha(I) >= {r}")


def sup_on_support(f: StepFunction, g: StepFunction) -> float:
    """``||f - g||`` in the sup norm restricted to the support of ``f``."""
    d = f.layout() - g.layout()
    spans = f.layout().support_intervals()
    best = Fraction(0)
    for s, e, v in d.segments():
        if any(min(e, b) > max(s, a) for a, b in spans):
            best = max(best, abs(v))
    return best


def replay_pigeonhole(members: Sequence[StepFunction], centers: Sequence[StepFunction], r):
    """Replay the proof against concrete centres.

    Returns ``(i, j, h_distance)`` where ``f_i, f_j`` share the same set of
    nearby centres and ``h_distance = min_k ||f_i - f_j - g_k||_inf``; the
    proof shows ``h_distance > r``.  Returns ``None`` if all patterns differ.
    """
    seen: dict[frozenset, int] = {}
    for i, f in enumerate(members):
        w = frozenset(k for k, g in enumerate(centers) if sup_on_support(f, g) <= r)
        if w in seen:
            j = seen[w]
            h = members[j].layout() - f.layout()
            dist = min((h - g.layout()).sup_norm() for g in centers)
            return j, i, dist
        seen[w] = i
    return None


def linf_certificate_from_json(doc: dict) -> LinfCertificate:
    from ..errors import SchemaError
    from ..reporting import SCHEMA_VERSION as version
    from ..stepfn import step_from_json
    try:
        if doc.get("schema_version") != version:
            raise SchemaError(f"unsupported schema_version {doc.get('schema_version')!r}")
        uniform = doc.get("uniform_pair_bound")
        normI = doc.get("normI")
        return LinfCertificate(to_value(doc["r"]), tuple(step_from_json(f) for f in doc["members"]),
                               tuple(float(x) for x in doc["x_norms"]),
                               tuple((int(i), int(j), float(v)) for i, j, v in doc.get("pair_bounds", ())),
                               None if uniform is None else float(uniform),
                               None if normI is None else float(normI))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"bad certificate document: {exc}") from exc
