"""Independent reference implementations used only by the tests.

None of these reuse the library's rearrangement or norm code paths.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


def distribution(f, s):
    """``mu{|f| > s}``."""
    return sum((p.measure for p in f.pieces if abs(p.value) > s), Fraction(0))


def fstar_by_distribution(f, t):
    """``f*(t) = inf{s >= 0 : mu{|f| > s} <= t}`` over the finitely many candidate levels."""
    levels = sorted({Fraction(0)} | {abs(p.value) for p in f.pieces})
    for s in levels:
        if distribution(f, s) <= t:
            return s
    raise AssertionError("unreachable")


def tfss_by_peetre(f, t):
    """``t f**(t) = inf_s (t s + int (|f| - s)_+)``; the infimum sits at a value level."""
    levels = {Fraction(0)} | {abs(p.value) for p in f.pieces}
    return min(t * s + sum((max(abs(p.value) - s, 0) * p.measure for p in f.pieces), Fraction(0))
               for s in levels)


def subset_sup(f, t_atoms, form):
    """Exhaustive sup over unions of equal atoms, written without the library helper."""
    vals = [abs(p.value) for p in f.pieces]
    h = f.pieces[0].measure
    best = None
    for sub in itertools.combinations(vals, t_atoms):
        c = min(sub) if form == "essinf" else sum(sub) * h
        best = c if best is None else max(best, c)
    return best


def majorant_by_definition(phi, ts, grid):
    """``phi~(t) = sup_s min(1, t/s) phi(s)`` on a sample grid of ``s``."""
    grid = np.asarray(grid, dtype=float)
    vals = phi.values(grid)
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    return np.array([np.max(np.minimum(1.0, t / grid) * vals) for t in ts])


def grid_for(L, n=100_000, octaves=60):
    top = float(L) if math.isfinite(L) else 1e6
    return np.geomspace(top * 2.0 ** -octaves, top * (1 - 1e-12), n)


def grid_norm(f, phi, which, n=100_000):
    """Dense-grid lower estimate of ``sup phi f*`` or ``sup phi f**``.

    The grid includes every breakpoint of ``f*`` and points just below it.
    """
    pieces = sorted(((abs(float(p.value)), float(p.measure)) for p in f.pieces if p.value != 0), reverse=True)
    bps = np.cumsum([0.0] + [m for _, m in pieces])
    vals = np.array([v for v, _ in pieces] + [0.0])
    L = float(phi.L)
    extra = np.concatenate([bps[1:], bps[1:] * (1 - 1e-12)])
    ts = np.unique(np.concatenate([grid_for(phi.L, n), extra]))
    ts = ts[(ts > 0) & (ts < L)]
    idx = np.searchsorted(bps, ts, side="right") - 1
    fstar = vals[np.minimum(idx, len(vals) - 1)]
    if which == "m":
        return float(np.max(phi.values(ts) * fstar))
    cum = np.concatenate([[0.0], np.cumsum(vals[:-1] * np.diff(bps))])
    k = np.minimum(idx, len(vals) - 1)
    integral = np.where(idx < len(vals) - 1, cum[np.minimum(idx, len(cum) - 1)] + vals[k] * (ts - bps[np.minimum(idx, len(bps) - 1)]), cum[-1])
    return float(np.max(phi.values(ts) * integral / ts))
