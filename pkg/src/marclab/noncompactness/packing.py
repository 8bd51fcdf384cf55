"""Dyadic packing of equal balls into a cube, with exact geometry.

Volumes are kept as ``c * pi**p`` with rational ``c``; the unit-ball volume
is ``omega_n = c_n pi**(n//2)`` with ``c_1 = 2``, ``c_2 = 1`` and
``c_n = 2 c_{n-2} / n``.  Comparisons between equal powers of ``pi`` are
exact; across different powers they use 60-digit arithmetic, which is
conclusive because ``pi`` is transcendental.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

import mpmath

from ..errors import DomainError


@dataclass(frozen=True)
class PiMeasure:
    """The number ``coef * pi**power``."""

    coef: Fraction
    power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coef", Fraction(self.coef))
        if self.coef == 0:
            object.__setattr__(self, "power", 0)

    @classmethod
    def of(cls, x: Union["PiMeasure", Fraction, int, float, str]) -> "PiMeasure":
        if isinstance(x, PiMeasure):
            return x
        if isinstance(x, float) and not math.isfinite(x):
            raise DomainError("measures must be finite")
        return cls(Fraction(x), 0)

    @classmethod
    def parse(cls, text: str) -> "PiMeasure":
        """Inverse of ``str``: ``"3/4"`` or ``"1/16*pi^1"``."""
        text = str(text).strip()
        if "*pi^" in text:
            coef, power = text.split("*pi^")
            return cls(Fraction(coef), int(power))
        return cls(Fraction(text), 0)

    def __add__(self, other) -> "PiMeasure":
        o = PiMeasure.of(other)
        if o.coef == 0:
            return self
        if self.coef == 0:
            return o
        if o.power != self.power:
            raise DomainError("cannot add different powers of pi exactly")
        return PiMeasure(self.coef + o.coef, self.power)

    __radd__ = __add__

    def __mul__(self, other) -> "PiMeasure":
        o = PiMeasure.of(other)
        return PiMeasure(self.coef * o.coef, self.power + o.power)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PiMeasure":
        o = PiMeasure.of(other)
        return PiMeasure(self.coef / o.coef, self.power - o.power)

    def __pow__(self, k: int) -> "PiMeasure":
        return PiMeasure(self.coef ** k, self.power * k)

    def _cmp(self, other) -> int:
        o = PiMeasure.of(other)
        if self.power == o.power or self.coef == 0 or o.coef == 0:
            # same power, or one side zero: the sign of the coefficients decides
            return (self.coef > o.coef) - (self.coef < o.coef)
        with mpmath.workdps(60):
            a = mpmath.mpf(self.coef.numerator) / self.coef.denominator * mpmath.pi ** self.power
            b = mpmath.mpf(o.coef.numerator) / o.coef.denominator * mpmath.pi ** o.power
            return (a > b) - (a < b)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self) -> float:
        return float(self.coef) * math.pi ** self.power

    def __str__(self) -> str:
        if self.power == 0:
            return str(self.coef)
        return f"{self.coef}*pi^{self.power}"


def unit_ball_volume(n: int) -> PiMeasure:
    if n < 1:
        raise DomainError("dimension must be positive")
    coef = {1: Fraction(2), 2: Fraction(1)}
    for d in range(3, n + 1):
        coef[d] = coef[d - 2] * Fraction(2, d)
    return PiMeasure(coef[n], n // 2)


@dataclass(frozen=True)
class Packing:
    """Balls of measure ``t1`` centred in the ``2^{nk}`` dyadic subcubes of ``Q``."""

    n: int
    center: tuple[Fraction, ...]
    side: Fraction
    t1: PiMeasure
    k: int
    explicit_centers: Optional[tuple[tuple[Fraction, ...], ...]] = None

    @property
    def Q_measure(self) -> PiMeasure:
        return PiMeasure(self.side ** self.n)

    @property
    def omega(self) -> PiMeasure:
        return unit_ball_volume(self.n)

    @property
    def B0_measure(self) -> PiMeasure:
        return self.omega * (self.side / 2) ** self.n

    @property
    def tau(self) -> PiMeasure:
        return self.B0_measure / (2 ** self.n * self.Q_measure)

    @property
    def m(self) -> int:
        return 2 ** (self.n * self.k)

    @property
    def sub_side(self) -> Fraction:
        return self.side / 2 ** self.k

    @property
    def radius_pow_n(self) -> PiMeasure:
        """``rho**n`` for the radius ``rho`` of each ball ``E_j``."""
        return self.t1 / self.omega

    @property
    def radius(self) -> float:
        return float(self.radius_pow_n) ** (1.0 / self.n)

    @property
    def QE_measure(self) -> PiMeasure:
        """Measure of the cube circumscribing one ball."""
        return PiMeasure(2 ** self.n) * self.radius_pow_n

    def cube_centers(self) -> Iterator[tuple[Fraction, ...]]:
        h = self.sub_side
        lo = [c - self.side / 2 for c in self.center]
        for idx in itertools.product(range(2 ** self.k), repeat=self.n):
            yield tuple(l + (i + Fraction(1, 2)) * h for l, i in zip(lo, idx))

    def ball_centers(self) -> Iterator[tuple[Fraction, ...]]:
        if self.explicit_centers is not None:
            return iter(self.explicit_centers)
        return self.cube_centers()

    def with_center(self, j: int, new_center: Sequence) -> "Packing":
        """Copy with ball ``j`` moved (materialises all centres; for small ``m``)."""
        cs = list(self.ball_centers())
        cs[j] = tuple(Fraction(c) for c in new_center)
        return Packing(self.n, self.center, self.side, self.t1, self.k, tuple(cs))

    def intervals(self) -> Iterator[tuple[Fraction, Fraction]]:
        """One-dimensional case: the sets ``E_j`` as intervals (exact)."""
        if self.n != 1:
            raise DomainError("intervals are only defined in dimension 1")
        half = self.t1.coef / 2
        for (c,) in self.ball_centers():
            yield (c - half, c + half)

    def to_json(self) -> dict:
        return {"n": self.n, "center": [str(c) for c in self.center], "side": str(self.side),
                "t1": str(self.t1), "k": self.k, "m": self.m, "tau": str(self.tau),
                "B0_measure": str(self.B0_measure), "radius": self.radius}


def build_packing(n: int, t1, side=Fraction(1), center: Optional[Sequence] = None,
                  max_level: int = 4096) -> Packing:
    """Choose the level ``k`` with ``|B0|/2^{n(k+1)} <= t1 < |B0|/2^{nk}`` and pack."""
    side = Fraction(side)
    if side <= 0:
        raise DomainError("cube side must be positive")
    center = tuple(Fraction(c) for c in (center if center is not None else [side / 2] * n))
    if len(center) != n:
        raise DomainError("centre has the wrong dimension")
    t1 = PiMeasure.of(t1)
    b0 = unit_ball_volume(n) * (side / 2) ** n
    if not (t1 > 0 and t1 < b0):
        raise DomainError(f"t1 must lie in (0, |B0|) = (0, {b0})")
    k = 0
    while not t1 >= b0 / 2 ** (n * (k + 1)):
        k += 1
        if k > max_level:
            raise DomainError("t1 too small for the level cap")
    return Packing(n, center, side, t1, k)


@dataclass(frozen=True)
class PackingCheck:
    name: str
    ok: bool
    detail: str = ""


@dataclass(frozen=True)
class PackingReport:
    checks: tuple[PackingCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def first_failure(self) -> Optional[PackingCheck]:
        return next((c for c in self.checks if not c.ok), None)

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": [c.__dict__ for c in self.checks]}


def _sq_dist(a, b) -> Fraction:
    return sum(((x - y) ** 2 for x, y in zip(a, b)), Fraction(0))


def verify_packing(p: Packing, explicit_limit: int = 256) -> PackingReport:
    """Re-derive every packing property.

    Lattice packings are certified structurally (the circumscribed cube of
    each ball is smaller than a dyadic subcube and both are concentric).
    Moved centres, or lattices with at most ``explicit_limit`` balls, are
    also checked ball by ball with a spatial hash.
    """
    n, b0, t1 = p.n, p.B0_measure, p.t1
    checks = [
        PackingCheck("level", p.m == 2 ** (n * p.k) and b0 / 2 ** (n * (p.k + 1)) <= t1 < b0 / 2 ** (n * p.k),
                     f"k={p.k}"),
        PackingCheck("volume_ratio", p.QE_measure / t1 == p.Q_measure / b0 == PiMeasure(2 ** n) / p.omega),
        PackingCheck("tau", p.tau == b0 / (2 ** n * p.Q_measure)),
        PackingCheck("inscribed_cube_smaller", p.QE_measure < p.Q_measure / 2 ** (n * p.k),
                     f"|Q_E|={p.QE_measure}"),
        PackingCheck("measure_sum", p.tau * p.Q_measure <= t1 * p.m < b0, f"sum={t1 * p.m}"),
    ]
    if p.explicit_centers is not None or p.m <= explicit_limit:
        checks.extend(_explicit_checks(p))
    return PackingReport(tuple(checks))


def _explicit_checks(p: Packing) -> list[PackingCheck]:
    n, h, rho_n = p.n, p.sub_side, p.radius_pow_n
    centers = list(p.ball_centers())
    contain_fail = None
    for j, (c, q) in enumerate(zip(centers, p.cube_centers())):
        slack = h / 2 - max(abs(x - y) for x, y in zip(c, q))
        if slack < 0 or PiMeasure(slack ** n) < rho_n:
            contain_fail = j
            break
    out = [PackingCheck("contained", contain_fail is None,
                        "" if contain_fail is None else f"ball {contain_fail} leaves its subcube")]
    lo = [x - p.side / 2 for x in p.center]
    grid: dict[tuple[int, ...], list[int]] = {}
    for j, c in enumerate(centers):
        key = tuple(math.floor((x - l) / h) for x, l in zip(c, lo))
        grid.setdefault(key, []).append(j)
    thresh = PiMeasure(4 ** n) * rho_n ** 2  # (2 rho)^(2n)
    overlap = None
    for key, members in sorted(grid.items()):
        for off in itertools.product((-1, 0, 1), repeat=n):
            nb = tuple(a + b for a, b in zip(key, off))
            for i in members:
                for j in grid.get(nb, ()):
                    if j <= i:
                        continue
                    if PiMeasure(_sq_dist(centers[i], centers[j]) ** n) < thresh:
                        overlap = (i, j)
                        break
                if overlap:
                    break
            if overlap:
                break
        if overlap:
            break
    out.append(PackingCheck("disjoint", overlap is None,
                            "" if overlap is None else f"balls {overlap[0]} and {overlap[1]} overlap"))
    return out
