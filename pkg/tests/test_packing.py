import itertools
import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from marclab.errors import DomainError
from marclab.noncompactness import PiMeasure, build_packing, unit_ball_volume, verify_packing


def test_unit_ball_volumes():
    for n in range(1, 9):
        assert float(unit_ball_volume(n)) == pytest.approx(math.pi ** (n / 2) / math.gamma(n / 2 + 1), rel=1e-14)


def test_pi_measure_arithmetic_and_order():
    a = PiMeasure(F(1, 16), 1)
    assert PiMeasure.parse(str(a)) == a
    assert a * 2 == PiMeasure(F(1, 8), 1)
    assert a / a == PiMeasure(1)
    assert PiMeasure(F(3)) < PiMeasure(1, 1) < PiMeasure(F(22, 7))
    assert PiMeasure(F(1, 2)) + PiMeasure(F(1, 2)) == PiMeasure(1)


def test_interval_packing_at_a_fifth():
    p = build_packing(1, F(1, 5))
    assert (p.k, p.m, p.tau) == (2, 4, PiMeasure(F(1, 2)))
    assert p.t1 * p.m == PiMeasure(F(4, 5))
    assert verify_packing(p).ok


def test_square_tau():
    assert build_packing(2, F(1, 100)).tau == PiMeasure(F(1, 16), 1)


def test_boundary_measure_belongs_to_lower_level():
    p = build_packing(1, F(1, 8))
    assert p.k == 2 and verify_packing(p).ok


def test_cube_near_upper_bound():
    b0 = unit_ball_volume(3) * F(1, 8)
    t1 = b0 / 8 * F(999, 1000)
    p = build_packing(3, t1)
    total = p.t1 * p.m
    assert p.tau * p.Q_measure <= total < p.B0_measure and verify_packing(p).ok


def test_moving_a_centre_is_detected():
    p = build_packing(2, PiMeasure(F(1, 400), 1))
    moved = p.with_center(1, next(iter(p.cube_centers())))
    rep = verify_packing(moved)
    assert not rep.ok
    names = {c.name for c in rep.checks if not c.ok}
    assert "disjoint" in names


def test_bad_inputs():
    with pytest.raises(DomainError):
        build_packing(0, F(1, 5))
    with pytest.raises(DomainError):
        build_packing(1, F(2))


def _float_geometry_ok(p):
    """Independent floating-point check of containment and disjointness."""
    rho = float(p.radius)
    centers = np.array([[float(x) for x in c] for c in p.ball_centers()])
    cubes = np.array([[float(x) for x in c] for c in p.cube_centers()])
    h = float(p.sub_side)
    contained = np.all(np.abs(centers - cubes) + rho <= h / 2 * (1 + 1e-12))
    if len(centers) < 2:
        return contained
    d = np.sqrt(((centers[:, None, :] - centers[None, :, :]) ** 2).sum(-1))
    d[np.diag_indices(len(d))] = np.inf
    return contained and d.min() >= 2 * rho * (1 - 1e-12)


@given(st.integers(1, 3), st.integers(1, 10 ** 6))
def test_invariants_for_random_measures(n, num):
    b0 = unit_ball_volume(n) * F(1, 2 ** n)
    t1 = b0 * F(num, 10 ** 6 + 1) / 2 ** n
    p = build_packing(n, t1)
    assert verify_packing(p).ok
    if p.m <= 512:
        assert _float_geometry_ok(p)


def test_interval_layout_matches_exact_intervals():
    p = build_packing(1, F(1, 20))
    ivs = list(p.intervals())
    assert len(ivs) == p.m
    assert all(b - a == F(1, 20) for a, b in ivs)
    assert all(b1 <= a2 for (_, b1), (a2, _) in zip(ivs, ivs[1:]))
