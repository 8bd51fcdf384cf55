import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from marclab.errors import DomainError, NonAdmissibleError, SchemaError
from marclab.phi import (PowerLogPhi, TabulatedPhi, almost_quasiconcave_constant, classify_phi,
                         delta2_constant, dilation_condition_value, dilation_sup, is_admissible,
                         least_quasiconcave_majorant, limit_t_over_phi, majorant, margin_growth_exponent,
                         not_too_constant_margin, parse_phi, phi_from_json, sample_power_log, sigma_threshold)

from oracles import grid_for, majorant_by_definition

SQRT = PowerLogPhi(0.5)


def test_power_log_values():
    assert SQRT(0.25) == pytest.approx(0.5, rel=1e-15)
    assert PowerLogPhi(1.0)(0.3) == pytest.approx(0.3, rel=1e-15)
    trud = PowerLogPhi(0.0, -0.5, 3.0)
    assert trud(0.1) == pytest.approx(math.log(60.0) ** -0.5, rel=1e-14)


def test_unrepresentable_turning_point_is_refused():
    with pytest.raises(DomainError):
        PowerLogPhi(1e-4, 1.0)


def test_domain_is_enforced():
    with pytest.raises(DomainError):
        SQRT(1.5)
    with pytest.raises(DomainError):
        SQRT(0.0)
    with pytest.raises(DomainError):
        PowerLogPhi(0.5, 1.0, "inf")


def test_parsing():
    assert parse_phi("power_log:0.5,0,1") == SQRT
    assert parse_phi("power_log:0.5,0,inf").L == math.inf
    assert parse_phi('{"family": "power_log", "alpha": 0.5}') == SQRT
    assert phi_from_json(SQRT.to_json()) == SQRT
    tab = TabulatedPhi((0.1, 0.5), (0.2, 0.6), 1.0, left_tail="proportional")
    assert phi_from_json(tab.to_json()) == tab
    with pytest.raises(SchemaError):
        parse_phi("nonsense")
    with pytest.raises(SchemaError):
        phi_from_json({"family": "power_log"})


def test_tabulated_interpolation_and_tails():
    tab = TabulatedPhi((0.2, 0.6), (1.0, 3.0), 1.0)
    assert tab(0.4) == pytest.approx(2.0)
    assert tab(0.1) == 1.0 and tab(0.9) == 3.0
    prop = TabulatedPhi((0.2, 0.6), (1.0, 3.0), 1.0, left_tail="proportional")
    assert prop(0.1) == pytest.approx(0.5)


def test_quasiconcave_phi_is_its_own_majorant():
    ts = np.array([1e-6, 0.01, 0.3, 0.99])
    assert np.allclose(majorant(SQRT).values(ts), SQRT.values(ts), rtol=1e-12)


def test_majorant_of_square_is_identity():
    assert least_quasiconcave_majorant(PowerLogPhi(2.0), 0.5) == pytest.approx(0.5, rel=1e-12)


def test_non_admissible_power_is_reported():
    with pytest.raises(NonAdmissibleError):
        majorant(PowerLogPhi(2.0, 0.0, "inf"))
    assert not is_admissible(PowerLogPhi(2.0, 0.0, "inf"))


@pytest.mark.parametrize("seed", range(12))
def test_majorant_matches_definition(seed):
    phi = sample_power_log(np.random.default_rng(seed))
    grid = grid_for(phi.L, 100_000)
    ts = np.geomspace(phi.L * 1e-6, phi.L * 0.99, 25)
    fast = majorant(phi).values(ts)
    slow = majorant_by_definition(phi, ts, grid)
    assert np.all(slow <= fast * (1 + 1e-9))
    assert np.allclose(fast, slow, rtol=1e-3)


@given(st.floats(0.0, 1.5), st.floats(-1.5, 1.5), st.sampled_from([0.5, 1.0, 2.0]))
def test_majorant_is_quasiconcave_and_dominates(alpha, beta, L):
    try:
        phi = PowerLogPhi(alpha, beta, L)
    except DomainError:
        return  # turning point below the representable range
    if not is_admissible(phi):
        return
    maj = majorant(phi)
    ts = np.geomspace(L * 1e-8, L * 0.999, 400)
    m, p = maj.values(ts), phi.values(ts)
    assert np.all(m >= p * (1 - 1e-12))
    assert np.all(np.diff(m) >= -1e-12 * m[1:])
    assert np.all(np.diff(m / ts) <= 1e-12 * (m / ts)[:-1])


def test_classification_of_square_root():
    c = classify_phi(SQRT)
    assert c.is_quasiconcave and c.is_admissible
    assert c.delta2_constant == pytest.approx(math.sqrt(2), rel=1e-9)
    assert c.limit_t_over_phi == "zero"
    assert c.almost_quasiconcave_constant == pytest.approx(1.0)


def test_limit_classification():
    assert limit_t_over_phi(PowerLogPhi(1.0)) == "positive_finite"
    assert limit_t_over_phi(PowerLogPhi(2.0)) == "infinite"
    assert limit_t_over_phi(PowerLogPhi(1.0, 0.5)) == "zero"


@pytest.mark.parametrize("alpha,beta", [(0.3, 0.0), (0.5, 0.3), (0.5, -0.3), (0.9, -0.05), (1.0, 0.5)])
def test_quasiconcave_members_have_doubling_at_most_two(alpha, beta):
    phi = PowerLogPhi(alpha, beta)
    assert classify_phi(phi).is_quasiconcave
    assert delta2_constant(phi) <= 2 * (1 + 1e-12)


def test_doubling_constant_matches_grid():
    phi = PowerLogPhi(0.5, 1.0)
    ts = np.geomspace(1e-300, 0.5 * (1 - 1e-12), 100_000)
    grid = float(np.max(phi.values(2 * ts) / phi.values(ts)))
    # the supremum is the limit at 0+, where the logarithms cancel
    assert grid <= delta2_constant(phi) * (1 + 1e-12)
    assert delta2_constant(phi) == pytest.approx(math.sqrt(2), rel=1e-12)
    assert delta2_constant(phi) <= grid * (1 + 1e-2)


@pytest.mark.parametrize("alpha,beta,expected", [(0.0, 0.3, None), (0.5, 0.5, "positive"),
                                                 (1.0, 0.5, "positive"), (0.0, -0.5, "positive"),
                                                 (2.0, 0.0, None)])
def test_almost_quasiconcave_catalogue(alpha, beta, expected):
    phi = PowerLogPhi(alpha, beta)
    if not is_admissible(phi):
        assert expected is None
        return
    c = almost_quasiconcave_constant(phi)
    assert (c is None) == (expected is None)
    if c is not None:
        assert 0 < c <= 1


def test_margin_for_powers():
    for p in (0.5, 2.0):
        phi = PowerLogPhi(1 / p)
        for a in (2.0, 10.0, 1e3):
            assert not_too_constant_margin(phi, a) == pytest.approx(a ** (1 / p), rel=1e-9)
        assert margin_growth_exponent(phi) == pytest.approx(1 / p, rel=1e-6)


def test_margin_for_slowly_varying_and_constant():
    flat = TabulatedPhi((0.5,), (1.0,), 1.0)
    assert not_too_constant_margin(flat, 8.0) == pytest.approx(1.0)
    assert margin_growth_exponent(flat) <= 1e-3
    assert margin_growth_exponent(PowerLogPhi(0.0, -0.5)) <= 1e-3
    with pytest.raises(DomainError):
        not_too_constant_margin(SQRT, 1.0)


def test_dilation_values():
    for theta in (0.5, 0.9):
        assert dilation_sup(SQRT, theta) == pytest.approx(theta ** -0.5, rel=1e-9)
    assert dilation_condition_value(SQRT) == pytest.approx(1.0, abs=1e-6)
    assert dilation_condition_value(TabulatedPhi((0.5,), (1.0,), 1.0)) == pytest.approx(1.0)
    assert dilation_condition_value(PowerLogPhi(0.5, 1.0)) <= 1 + 1e-9


def test_sigma_identity_case_solves_linear_inequality():
    phi = PowerLogPhi(1.0)
    s = sigma_threshold(phi, "M", 0.1, 0.5, 1.0, 4, 1.0, 0.9)
    assert s == pytest.approx((1.0 + 0.9) / (0.1 * 0.125), rel=1e-8)
    assert s > (1.0 + 0.9) / (0.1 * 0.125)


def test_sigma_cases_differ_by_factor_two_when_arguments_coincide():
    phi = PowerLogPhi(0.5)
    m = sigma_threshold(phi, "m", 0.1, 0.5, 1.0, 4, 1.0, 0.9)
    M = sigma_threshold(phi, "M", 0.1, 0.05, 1.0, 4, 1.0, 0.9)
    assert m / M == pytest.approx(2.0, rel=1e-12)


def test_sigma_plug_back():
    phi = PowerLogPhi(0.5)
    s = sigma_threshold(phi, "M", 0.1, 0.5, 1.0, 4, 1.0, 0.9)
    assert 0.1 * s * phi(0.125) > 1.9
    assert 0.1 * s * (1 - 1e-6) * phi(0.125) < 1.9


def test_sample_power_log_is_seeded_and_admissible():
    a = [sample_power_log(np.random.default_rng(7)) for _ in range(2)]
    assert a[0] == a[1] and is_admissible(a[0])
