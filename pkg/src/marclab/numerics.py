"""Numeric policy and the refined-supremum search used across the package."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class NumericPolicy:
    """Tolerances and grid sizes for every sup/inf computed numerically.

    ``depth`` is the number of binary octaves used when approaching 0 from
    the right, ``horizon`` truncates suprema over an infinite domain.
    """

    grid_points_per_piece: int = 64
    tol_rel: float = 1e-9
    oracle_grid: int = 100_000
    depth: int = 256
    horizon: float = 1e12

    def __post_init__(self):
        if not self.tol_rel > 0:
            raise ValueError("tol_rel must be positive")
        if self.grid_points_per_piece < 8:
            raise ValueError("grid_points_per_piece must be at least 8")
        if self.oracle_grid < 2:
            raise ValueError("oracle_grid must be at least 2")

    @classmethod
    def from_env(cls, **overrides) -> "NumericPolicy":
        """Default policy with ``MARCLAB_TOL`` overriding ``tol_rel``."""
        policy = cls(**overrides)
        tol = os.environ.get("MARCLAB_TOL")
        if tol:
            policy = replace(policy, tol_rel=float(tol))
        return policy


DEFAULT_POLICY = NumericPolicy()


def sample_grid(lo: float, hi: float, n: int) -> np.ndarray:
    """Points covering ``[lo, hi]``: a linear and, for ``lo > 0``, a geometric grid."""
    lin = np.linspace(lo, hi, n)
    if lo > 0 and hi / lo > 4.0:
        geo = np.geomspace(lo, hi, n)
        lin = np.union1d(lin, geo)
    return lin


def golden_max(fn: Callable[[float], float], lo: float, hi: float, tol_rel: float,
               max_iter: int = 200) -> tuple[float, float]:
    """Golden-section search for a local maximum of ``fn`` on ``[lo, hi]``."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(max_iter):
        if b - a <= tol_rel * max(abs(b), abs(a), 1e-300):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = fn(d)
    if fc >= fd:
        return fc, c
    return fd, d


def refined_max(fn: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
                policy: NumericPolicy = DEFAULT_POLICY,
                include_ends: bool = True) -> tuple[float, float]:
    """Maximum of a vectorised ``fn`` over ``[lo, hi]``.

    Samples the interval, then golden-section refines around the best three
    samples until the bracket is narrower than ``policy.tol_rel``.  Returns
    ``(value, argmax)``.
    """
    if hi < lo:
        raise ValueError("empty interval")
    if hi == lo:
        return float(fn(np.array([lo]))[0]), lo
    ts = sample_grid(lo, hi, policy.grid_points_per_piece)
    if not include_ends:
        ts = ts[1:-1]
    vals = np.asarray(fn(ts), dtype=float)
    vals = np.where(np.isnan(vals), -np.inf, vals)
    best = int(np.argmax(vals))
    best_val, best_t = float(vals[best]), float(ts[best])
    if not np.isfinite(best_val):
        return best_val, best_t
    scalar = lambda x: float(fn(np.array([x]))[0])  # noqa: E731
    for i in np.argsort(vals)[::-1][:3]:
        i = int(i)
        a = float(ts[max(i - 1, 0)])
        b = float(ts[min(i + 1, len(ts) - 1)])
        if b <= a:
            continue
        v, t = golden_max(scalar, a, b, policy.tol_rel)
        if v > best_val:
            best_val, best_t = v, t
    return best_val, best_t


def refined_min(fn: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
                policy: NumericPolicy = DEFAULT_POLICY) -> tuple[float, float]:
    """Minimum counterpart of :func:`refined_max`."""
    v, t = refined_max(lambda x: -np.asarray(fn(x), dtype=float), lo, hi, policy)
    return -v, t


def log_refined_max(fn: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
                    policy: NumericPolicy = DEFAULT_POLICY) -> tuple[float, float]:
    """:func:`refined_max` carried out in the variable ``log t``.

    Used for scale-free suprema over ranges spanning many octaves.
    """
    if not 0 < lo <= hi:
        raise ValueError("log search needs 0 < lo <= hi")
    octaves = max(1, int(math.ceil(math.log2(hi / lo))) if hi > lo else 1)
    local = replace(policy, grid_points_per_piece=max(policy.grid_points_per_piece, 4 * octaves))
    v, u = refined_max(lambda u: fn(np.exp(u)), math.log(lo), math.log(hi), local)
    return v, math.exp(u)


def log_refined_min(fn, lo, hi, policy: NumericPolicy = DEFAULT_POLICY) -> tuple[float, float]:
    v, t = log_refined_max(lambda x: -np.asarray(fn(x), dtype=float), lo, hi, policy)
    return -v, t
