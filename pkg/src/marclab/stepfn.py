"""Exact algebra of step functions on an interval and their rearrangements.

Measures are :class:`fractions.Fraction`.  Values may be ``Fraction`` (then
every derived quantity stays exact) or ``float`` (values such as
``1/phi(r)`` that depend on a transcendental ``phi``).
"""

from __future__ import annotations

import itertools
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import DomainError, OverlapError, SchemaError

Number = Union[Fraction, float, int]
INF = math.inf


def to_fraction(x) -> Fraction:
    """Exact conversion of ints, floats and ``"p/q"`` strings."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float) and not math.isfinite(x):
        raise DomainError(f"non-finite measure {x!r}")
    return Fraction(x)


def to_value(x) -> Number:
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    return x


def fmt_number(x):
    """JSON-friendly rendering: fractions as ``"p/q"`` strings, floats as-is."""
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


@dataclass(frozen=True)
class Piece:
    value: Number
    measure: Fraction
    at: Optional[tuple[Fraction, Fraction]] = None

    def __post_init__(self):
        object.__setattr__(self, "measure", to_fraction(self.measure))
        object.__setattr__(self, "value", to_value(self.value))
        if self.measure <= 0:
            raise DomainError("piece measures must be positive")
        if self.at is not None:
            start, end = to_fraction(self.at[0]), to_fraction(self.at[1])
            if end - start != self.measure:
                raise DomainError(f"position {start}..{end} does not match measure {self.measure}")
            object.__setattr__(self, "at", (start, end))


@dataclass(frozen=True)
class StepFunction:
    """Finitely many ``(value, measure)`` pieces on ``(0, L)``.

    If every piece carries a position ``at = (start, end)`` the function is
    *positioned* and pointwise operations use those intervals; otherwise the
    pieces are laid out consecutively from 0.
    """

    pieces: tuple[Piece, ...]
    L: Number = INF

    def __post_init__(self):
        pieces = tuple(p if isinstance(p, Piece) else Piece(*p) for p in self.pieces)
        object.__setattr__(self, "pieces", pieces)
        L = self.L
        if not (isinstance(L, float) and math.isinf(L)):
            L = to_fraction(L)
        object.__setattr__(self, "L", L)
        if sum((p.measure for p in pieces), Fraction(0)) > L:
            raise DomainError("total measure of pieces exceeds L")
        pos = [p.at is not None for p in pieces]
        if any(pos) and not all(pos):
            raise DomainError("either all pieces are positioned or none")
        if all(pos) and pieces:
            iv = sorted(p.at for p in pieces)
            for (s0, e0), (s1, e1) in zip(iv, iv[1:]):
                if s1 < e0:
                    raise DomainError("positioned pieces overlap")
            if iv[0][0] < 0 or iv[-1][1] > L:
                raise DomainError("positioned pieces leave (0, L)")

    # -- construction -----------------------------------------------------
    @classmethod
    def indicator(cls, start, end, value: Number = Fraction(1), L: Number = INF) -> "StepFunction":
        start, end = to_fraction(start), to_fraction(end)
        return cls((Piece(value, end - start, (start, end)),), L)

    @classmethod
    def from_values(cls, values: Sequence[Number], measures: Sequence, L: Number = INF,
                    positioned: bool = True) -> "StepFunction":
        pieces, x = [], Fraction(0)
        for v, m in zip(values, measures):
            m = to_fraction(m)
            pieces.append(Piece(v, m, (x, x + m) if positioned else None))
            x += m
        return cls(tuple(pieces), L)

    # -- basic queries ----------------------------------------------------
    @property
    def positioned(self) -> bool:
        return bool(self.pieces) and self.pieces[0].at is not None

    def segments(self) -> list[tuple[Fraction, Fraction, Number]]:
        """Sorted ``(start, end, value)`` triples (laid out from 0 if unpositioned)."""
        if self.positioned:
            return sorted((p.at[0], p.at[1], p.value) for p in self.pieces)
        out, x = [], Fraction(0)
        for p in self.pieces:
            out.append((x, x + p.measure, p.value))
            x += p.measure
        return out

    def layout(self) -> "StepFunction":
        """Positioned copy (identity on positioned functions)."""
        if self.positioned or not self.pieces:
            return self
        return StepFunction(tuple(Piece(v, e - s, (s, e)) for s, e, v in self.segments()), self.L)

    def support_measure(self) -> Fraction:
        return sum((p.measure for p in self.pieces if p.value != 0), Fraction(0))

    def support_intervals(self) -> list[tuple[Fraction, Fraction]]:
        return [(s, e) for s, e, v in self.segments() if v != 0]

    def integral(self) -> Number:
        """``int |f|``."""
        return sum((abs(p.value) * p.measure for p in self.pieces), Fraction(0))

    def sup_norm(self) -> Number:
        return max((abs(p.value) for p in self.pieces), default=Fraction(0))

    def value_at(self, x) -> Number:
        x = to_fraction(x)
        for s, e, v in self.segments():
            if s <= x < e:
                return v
        return Fraction(0)

    # -- restriction to a set ---------------------------------------------
    def _overlaps(self, lo: Fraction, hi: Fraction):
        for s, e, v in self.segments():
            a, b = max(s, lo), min(e, hi)
            if b > a:
                yield b - a, v

    def essinf_on(self, lo, hi) -> Number:
        """``essinf |f|`` over the interval ``[lo, hi)``."""
        lo, hi = to_fraction(lo), to_fraction(hi)
        covered, best = Fraction(0), None
        for m, v in self._overlaps(lo, hi):
            covered += m
            best = abs(v) if best is None else min(best, abs(v))
        if covered < hi - lo or best is None:
            return Fraction(0)
        return best

    def average_on(self, lo, hi) -> Number:
        """``(1/(hi-lo)) * int_lo^hi |f|``."""
        lo, hi = to_fraction(lo), to_fraction(hi)
        total = sum((abs(v) * m for m, v in self._overlaps(lo, hi)), Fraction(0))
        return total / (hi - lo)

    # -- algebra ----------------------------------------------------------
    def scaled(self, lam: Number) -> "StepFunction":
        lam = to_value(lam)
        return StepFunction(tuple(Piece(lam * p.value, p.measure, p.at) for p in self.pieces), self.L)

    def translated(self, offset) -> "StepFunction":
        off = to_fraction(offset)
        f = self.layout()
        return StepFunction(tuple(Piece(p.value, p.measure, (p.at[0] + off, p.at[1] + off))
                                  for p in f.pieces), self.L)

    def combine(self, other: "StepFunction", sign: int = 1) -> "StepFunction":
        """Pointwise ``self + sign * other`` on the common refinement."""
        if self.L != other.L:
            raise DomainError("functions live on different intervals")
        cuts = sorted({c for s, e, _ in self.segments() + other.segments() for c in (s, e)})
        pieces = []
        for a, b in zip(cuts, cuts[1:]):
            mid = (a + b) / 2
            v = self.value_at(mid) + sign * other.value_at(mid)
            if v != 0:
                pieces.append(Piece(v, b - a, (a, b)))
        return StepFunction(tuple(pieces), self.L)

    def __add__(self, other: "StepFunction") -> "StepFunction":
        return self.combine(other, 1)

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        return self.combine(other, -1)

    def __neg__(self) -> "StepFunction":
        return self.scaled(-1)

    # -- serialisation ----------------------------------------------------
    def to_json(self) -> dict:
        pieces = []
        for p in self.pieces:
            d = {"value": fmt_number(p.value), "measure": str(p.measure)}
            if p.at is not None:
                d["at"] = [str(p.at[0]), str(p.at[1])]
            pieces.append(d)
        return {"pieces": pieces, "L": fmt_number(self.L)}


def step_from_json(doc: dict) -> StepFunction:
    try:
        L = doc.get("L", "inf")
        L = INF if L in ("inf", None) else to_fraction(L)
        pieces = []
        for d in doc["pieces"]:
            at = d.get("at")
            pieces.append(Piece(to_value(d["value"]), to_fraction(d["measure"]),
                                (to_fraction(at[0]), to_fraction(at[1])) if at else None))
        return StepFunction(tuple(pieces), L)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"bad step function document: {exc}") from exc


# ---------------------------------------------------------------------------
# rearrangements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecreasingProfile:
    """``f* = values[k]`` on ``[breakpoints[k], breakpoints[k+1])``, 0 afterwards."""

    breakpoints: tuple[Fraction, ...]
    values: tuple[Number, ...]

    def __post_init__(self):
        if len(self.breakpoints) != len(self.values) + 1 or self.breakpoints[0] != 0:
            raise DomainError("profile needs breakpoints 0 = t_0 < ... < t_K and K values")
        if any(b >= c for b, c in zip(self.breakpoints, self.breakpoints[1:])):
            raise DomainError("profile breakpoints must increase strictly")
        if any(v < w for v, w in zip(self.values, self.values[1:])) or any(v < 0 for v in self.values):
            raise DomainError("profile values must be nonnegative and nonincreasing")

    @property
    def support(self) -> Fraction:
        return self.breakpoints[-1]

    def __call__(self, t) -> Number:
        """Right-continuous value ``f*(t)``."""
        if not t > 0:
            raise DomainError("rearrangements are evaluated at t > 0")
        k = bisect_right(self.breakpoints, t) - 1
        return self.values[k] if k < len(self.values) else Fraction(0)

    def left_limit(self, t) -> Number:
        """``f*(t-)``."""
        if not t > 0:
            raise DomainError("rearrangements are evaluated at t > 0")
        k = bisect_left(self.breakpoints, t) - 1
        return self.values[k] if k < len(self.values) else Fraction(0)

    def as_step_function(self, L: Number = INF) -> StepFunction:
        return StepFunction.from_values(self.values,
                                        [b - a for a, b in zip(self.breakpoints, self.breakpoints[1:])], L)

    def pieces(self):
        """Iterate ``(t_{k-1}, t_k, v_k)``."""
        return zip(self.breakpoints, self.breakpoints[1:], self.values)


@dataclass(frozen=True)
class MaximalProfile:
    """``f**(t) = (C_k + v_k (t - t_{k-1})) / t`` on piece ``k``."""

    profile: DecreasingProfile
    cumulative: tuple[Number, ...] = field(default=())

    def __post_init__(self):
        if not self.cumulative:
            acc, cum = Fraction(0), []
            for a, b, v in self.profile.pieces():
                cum.append(acc)
                acc = acc + v * (b - a)
            cum.append(acc)
            object.__setattr__(self, "cumulative", tuple(cum))

    @property
    def total(self) -> Number:
        return self.cumulative[-1]

    def integral_to(self, t) -> Number:
        """``int_0^t f*``."""
        bp = self.profile.breakpoints
        k = bisect_right(bp, t) - 1
        if k >= len(self.profile.values):
            return self.total
        return self.cumulative[k] + self.profile.values[k] * (t - bp[k])

    def __call__(self, t) -> Number:
        if not t > 0:
            raise DomainError("rearrangements are evaluated at t > 0")
        return self.integral_to(t) / t


def rearrangement(f: StepFunction) -> DecreasingProfile:
    """Nonincreasing rearrangement: sort ``|value|`` descending and accumulate measures."""
    items = sorted(((abs(p.value), p.measure) for p in f.pieces if p.value != 0),
                   key=lambda vm: vm[0], reverse=True)
    bps, vals = [Fraction(0)], []
    for v, m in items:
        if vals and vals[-1] == v:
            bps[-1] += m
        else:
            vals.append(v)
            bps.append(bps[-1] + m)
    return DecreasingProfile(tuple(bps), tuple(vals))


def maximal_rearrangement(f: StepFunction) -> MaximalProfile:
    return MaximalProfile(rearrangement(f))


def eval_profile(p: DecreasingProfile | MaximalProfile, t, left: bool = False) -> Number:
    """Evaluate ``f*`` (right-continuous, or its left limit) or ``f**`` at ``t > 0``."""
    if isinstance(p, MaximalProfile):
        return p(t)
    return p.left_limit(t) if left else p(t)


eval_profiles = eval_profile


def disjoint_sum(fs: Sequence[StepFunction]) -> StepFunction:
    """Sum of positioned functions with pairwise disjoint supports.

    Raises :class:`OverlapError` naming the first offending pair.
    """
    if not fs:
        return StepFunction((), INF)
    L = fs[0].L
    spans = []
    for i, f in enumerate(fs):
        if f.pieces and not f.positioned:
            raise DomainError(f"function {i} has no position data")
        if f.L != L:
            raise DomainError("functions live on different intervals")
        spans.extend((s, e, i) for s, e in f.support_intervals())
    spans.sort()
    reach, owner = None, None
    for s, e, i in spans:
        if reach is not None and s < reach and owner != i:
            raise OverlapError(min(owner, i), max(owner, i), f"at {s}")
        if reach is None or e > reach:
            reach, owner = e, i
    return StepFunction(tuple(p for f in fs for p in f.pieces), L)


# ---------------------------------------------------------------------------
# inequality checks and oracles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InequalityCheck:
    name: str
    point: tuple
    lhs: Number
    rhs: Number
    ok: bool


def _leq(lhs, rhs, tol: float) -> bool:
    if isinstance(lhs, Fraction) and isinstance(rhs, Fraction):
        return lhs <= rhs
    return lhs <= rhs + tol * max(1.0, abs(float(rhs)))


def verify_rearrangement_inequalities(f: StepFunction, g: StepFunction, sample_ts: Sequence,
                                      sample_pairs: Optional[Sequence[tuple]] = None,
                                      tol: float = 1e-12) -> list[InequalityCheck]:
    """Check subadditivity of ``**`` and the shifted subadditivity of ``*``.

    ``(f+g)**(t) <= f**(t) + g**(t)`` at each sample ``t`` and
    ``(f+g)*(s+t) <= f*(s) + g*(t)`` at each pair (default: samples paired
    with the reversed samples).  If ``f`` and ``g`` have disjoint supports the
    lower bound ``(f+g)*(2t) >= min(f*(t), g*(t))`` is checked too.
    Comparisons are exact when all values are rational.
    """
    fl, gl = f.layout(), g.layout()
    h = fl + gl
    fs, gs, hs = rearrangement(fl), rearrangement(gl), rearrangement(h)
    fss, gss, hss = MaximalProfile(fs), MaximalProfile(gs), MaximalProfile(hs)
    out = []
    for t in sample_ts:
        lhs, rhs = hss(t), fss(t) + gss(t)
        out.append(InequalityCheck("f**-subadditivity", (t,), lhs, rhs, _leq(lhs, rhs, tol)))
    if sample_pairs is None:
        sample_pairs = list(zip(sample_ts, reversed(list(sample_ts))))
    for s, t in sample_pairs:
        lhs, rhs = hs(s + t), fs(s) + gs(t)
        out.append(InequalityCheck("f*-subadditivity", (s, t), lhs, rhs, _leq(lhs, rhs, tol)))
    if _disjoint(fl, gl):
        out.extend(verify_disjoint_lower_bound([fl, gl], sample_ts, tol))
    return out


def _disjoint(f: StepFunction, g: StepFunction) -> bool:
    try:
        disjoint_sum([f, g])
    except OverlapError:
        return False
    return True


def verify_disjoint_lower_bound(fs: Sequence[StepFunction], sample_ts: Sequence,
                                tol: float = 1e-12) -> list[InequalityCheck]:
    """``(sum f_j)*(N t) >= min_j f_j*(t)`` for disjointly supported ``f_1..f_N``."""
    total = disjoint_sum(fs)
    n = len(fs)
    hs = rearrangement(total)
    parts = [rearrangement(f) for f in fs]
    out = []
    for t in sample_ts:
        lhs = hs(n * t)
        rhs = min(p(t) for p in parts)
        out.append(InequalityCheck("disjoint-lower-bound", (t,), rhs, lhs, _leq(rhs, lhs, tol)))
    return out


ORACLE_MAX_ATOMS = 20


def fstar_alt_oracle(f: StepFunction, t_atoms: int, form: str = "essinf") -> Number:
    """Brute-force supremum over unions of ``t_atoms`` equal atoms.

    ``form="essinf"`` returns ``sup_{mu(E)=t} essinf_E |f|`` (equal to
    ``f*(t-)``); ``form="integral"`` returns ``sup_{mu(E)=t} int_E |f|``
    (equal to ``t f**(t)``).  Every piece of ``f`` is one atom and all atoms
    must have the same measure.
    """
    n = len(f.pieces)
    if n > ORACLE_MAX_ATOMS:
        raise DomainError(f"exhaustive oracle limited to {ORACLE_MAX_ATOMS} atoms, got {n}")
    if len({p.measure for p in f.pieces}) > 1:
        raise DomainError("oracle needs equal-measure atoms")
    if not 1 <= t_atoms <= n:
        raise DomainError("t_atoms must lie in 1..n")
    h = f.pieces[0].measure
    vals = [abs(p.value) for p in f.pieces]
    best = None
    for subset in itertools.combinations(range(n), t_atoms):
        if form == "essinf":
            cand = min(vals[i] for i in subset)
        elif form == "integral":
            cand = sum((vals[i] * h for i in subset), Fraction(0))
        else:
            raise DomainError(f"unknown oracle form {form!r}")
        if best is None or cand > best:
            best = cand
    return best


def random_step_function(rng, n_pieces: int, L: Number = Fraction(1), rational: bool = True,
                         positioned: bool = False, max_value: int = 20,
                         denominator: int = 64) -> StepFunction:
    """Random step function with rational breakpoints; used by property sweeps."""
    L = to_fraction(L)
    cuts = sorted(set(int(c) for c in rng.integers(1, denominator, size=n_pieces)))
    cuts = [Fraction(0)] + [L * Fraction(c, denominator) for c in cuts] + [L]
    pieces = []
    for a, b in zip(cuts, cuts[1:]):
        if rational:
            v = Fraction(int(rng.integers(-max_value, max_value + 1)), int(rng.integers(1, 5)))
        else:
            v = float(rng.uniform(-max_value, max_value))
        if v != 0:
            pieces.append(Piece(v, b - a, (a, b) if positioned else None))
    return StepFunction(tuple(pieces), L)


def random_disjoint_family(rng, count: int, n_pieces: int, L: Number = Fraction(1),
                           denominator: int = 64) -> list[StepFunction]:
    """``count`` random functions supported in consecutive slots ``[jL/count, (j+1)L/count)``."""
    L = to_fraction(L)
    width = L / count
    out = []
    for j in range(count):
        f = random_step_function(rng, n_pieces, width, positioned=True, denominator=denominator)
        shift = width * j
        out.append(StepFunction(tuple(Piece(p.value, p.measure, (p.at[0] + shift, p.at[1] + shift))
                                      for p in f.pieces), L))
    return out


@dataclass(frozen=True)
class SweepSummary:
    trials: int
    checks: int
    failures: int
    by_name: tuple[tuple[str, int, int], ...]
    first_failure: Optional[InequalityCheck] = None

    def to_json(self) -> dict:
        out = {"trials": self.trials, "checks": self.checks, "failures": self.failures,
               "by_name": [{"name": n, "checks": c, "failures": k} for n, c, k in self.by_name]}
        if self.first_failure is not None:
            out["first_failure"] = self.first_failure.__dict__
        return out


def inequality_sweep(seed: int, trials: int, points: int = 50, max_pieces: int = 8,
                     disjoint_sizes: Sequence[int] = (2, 3, 5)) -> SweepSummary:
    """Seeded random sweep of the rearrangement inequalities.

    Each trial draws a pair ``(f, g)`` on ``[0, 1)`` and ``points`` rational
    sample points, then a disjoint family of every size in ``disjoint_sizes``.
    """
    import numpy as np

    rng = np.random.default_rng(seed)
    tally: dict[str, list[int]] = {}
    first = None

    def record(checks):
        nonlocal first
        for c in checks:
            slot = tally.setdefault(c.name, [0, 0])
            slot[0] += 1
            if not c.ok:
                slot[1] += 1
                first = first or c

    for _ in range(trials):
        f = random_step_function(rng, int(rng.integers(1, max_pieces + 1)), positioned=True)
        g = random_step_function(rng, int(rng.integers(1, max_pieces + 1)), positioned=True)
        ts = [Fraction(int(k), 128) for k in rng.integers(1, 129, size=points)]
        record(verify_rearrangement_inequalities(f, g, ts))
        for n in disjoint_sizes:
            fam = random_disjoint_family(rng, n, int(rng.integers(1, max_pieces + 1)))
            record(verify_disjoint_lower_bound(fam, ts))
    by_name = tuple((k, v[0], v[1]) for k, v in sorted(tally.items()))
    return SweepSummary(trials, sum(v[0] for v in tally.values()), sum(v[1] for v in tally.values()),
                        by_name, first)
