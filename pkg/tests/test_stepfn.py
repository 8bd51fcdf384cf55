from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from marclab.errors import DomainError, OverlapError, SchemaError
from marclab.stepfn import (MaximalProfile, Piece, StepFunction, disjoint_sum, fstar_alt_oracle,
                            inequality_sweep, random_disjoint_family, random_step_function, rearrangement,
                            step_from_json, verify_disjoint_lower_bound, verify_rearrangement_inequalities)

from oracles import fstar_by_distribution, subset_sup, tfss_by_peetre
from strategies import sample_points, step_functions


def test_rearrangement_of_listed_values():
    f = StepFunction.from_values([3, 1, 4, 1, 5, 9], [1] * 6)
    prof = rearrangement(f)
    assert prof.values == (9, 5, 4, 3, 1)
    assert prof(2) == 4 and prof.left_limit(2) == 5
    assert MaximalProfile(prof)(2) * 2 == 14


def test_indicator_profile_is_right_continuous():
    f = StepFunction.indicator(0, F(3, 10), 1, L=1)
    prof = rearrangement(f)
    assert prof(F(3, 10)) == 0
    assert prof.left_limit(F(3, 10)) == 1
    assert MaximalProfile(prof)(F(3, 5)) == F(1, 2)


def test_zero_function_has_empty_profile():
    prof = rearrangement(StepFunction((), 1))
    assert prof.values == () and prof(F(1, 2)) == 0


def test_negative_values_use_absolute_value():
    f = StepFunction.from_values([-7, 2], [F(1, 4), F(1, 4)], L=1)
    assert rearrangement(f)(F(1, 8)) == 7


def test_profile_rejects_nonpositive_t():
    with pytest.raises(DomainError):
        rearrangement(StepFunction.indicator(0, 1))(0)


def test_overlap_is_reported_with_indices():
    a = StepFunction.indicator(0, F(1, 2), L=1)
    b = StepFunction.indicator(F(1, 4), F(3, 4), L=1)
    c = StepFunction.indicator(F(3, 4), 1, L=1)
    disjoint_sum([a, c])
    with pytest.raises(OverlapError) as err:
        disjoint_sum([a, c, b])
    assert err.value.pair == (0, 2)


def test_constructor_validation():
    with pytest.raises(DomainError):
        StepFunction((Piece(1, F(2)),), L=1)
    with pytest.raises(DomainError):
        StepFunction((Piece(1, F(1, 2), (F(0), F(1, 2))), Piece(1, F(1, 2), (F(1, 4), F(3, 4)))), L=1)


def test_json_round_trip_and_schema_errors():
    f = StepFunction.from_values([F(1, 3), 2.5], [F(1, 4), F(1, 2)], L=1)
    assert step_from_json(f.to_json()) == f
    with pytest.raises(SchemaError):
        step_from_json({"pieces": [{"value": 1}]})


@given(step_functions(), sample_points())
def test_fstar_matches_distribution_formula(f, ts):
    prof = rearrangement(f)
    for t in ts:
        assert prof(t) == fstar_by_distribution(f, t)


@given(step_functions(), sample_points())
def test_fss_matches_peetre_formula(f, ts):
    maxp = MaximalProfile(rearrangement(f))
    for t in ts:
        assert maxp(t) * t == tfss_by_peetre(f, t)


@given(step_functions())
def test_rearrangement_is_equimeasurable(f):
    prof = rearrangement(f)
    g = prof.as_step_function(f.L)
    for s in {F(0)} | {abs(p.value) for p in f.pieces}:
        assert sum((p.measure for p in g.pieces if p.value > s), F(0)) == \
            sum((p.measure for p in f.pieces if abs(p.value) > s), F(0))
    assert g.integral() == f.integral()


@given(step_functions(), step_functions(), sample_points())
def test_rearrangement_inequalities_hold(f, g, ts):
    assert all(c.ok for c in verify_rearrangement_inequalities(f, g, ts))


@given(st.integers(2, 5), st.integers(0, 2 ** 32 - 1), sample_points())
def test_disjoint_lower_bound_holds(n, seed, ts):
    fam = random_disjoint_family(np.random.default_rng(seed), n, 4)
    assert all(c.ok for c in verify_disjoint_lower_bound(fam, ts))


def test_disjoint_lower_bound_can_fail_for_overlapping_supports():
    with pytest.raises(OverlapError):
        verify_disjoint_lower_bound([StepFunction.indicator(0, F(1, 2), L=1)] * 2, [F(1, 4)])


@pytest.mark.parametrize("seed", range(20))
def test_exhaustive_oracle_agrees(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 11))
    h = F(1, n)
    f = StepFunction.from_values([F(int(v), 3) for v in rng.integers(-9, 10, size=n)], [h] * n, L=1)
    prof = rearrangement(f)
    maxp = MaximalProfile(prof)
    for j in range(1, n + 1):
        t = j * h
        assert fstar_alt_oracle(f, j, "essinf") == prof.left_limit(t) == subset_sup(f, j, "essinf")
        assert fstar_alt_oracle(f, j, "integral") == t * maxp(t) == subset_sup(f, j, "integral")


def test_oracle_limits():
    f = StepFunction.from_values([1] * 21, [F(1, 21)] * 21, L=1)
    with pytest.raises(DomainError):
        fstar_alt_oracle(f, 3)
    with pytest.raises(DomainError):
        fstar_alt_oracle(StepFunction.from_values([1, 2], [F(1, 3), F(2, 3)], L=1), 1)


def test_random_step_function_is_seeded():
    a = random_step_function(np.random.default_rng(5), 6, positioned=True)
    b = random_step_function(np.random.default_rng(5), 6, positioned=True)
    assert a == b


def test_inequality_sweep_is_clean_and_seeded():
    s1, s2 = inequality_sweep(3, 20), inequality_sweep(3, 20)
    assert s1 == s2 and s1.failures == 0 and s1.checks > 0


def test_algebra():
    f = StepFunction.indicator(0, F(1, 2), 2, L=1)
    g = StepFunction.indicator(F(1, 4), 1, 1, L=1)
    h = f + g
    assert h.value_at(F(1, 3)) == 3 and h.value_at(F(3, 4)) == 1
    assert (f - f).pieces == ()
    assert (-f).value_at(0) == -2
    assert f.translated(F(1, 4)).value_at(F(5, 8)) == 2
    assert f.scaled(F(1, 2)).integral() == F(1, 2)
    assert h.essinf_on(0, 1) == 1 and h.average_on(0, F(1, 2)) == F(5, 2)


def test_eval_profiles_dispatch():
    from marclab.stepfn import eval_profiles
    prof = rearrangement(StepFunction.indicator(0, F(3, 10), 1, L=1))
    assert eval_profiles(prof, F(3, 10)) == 0
    assert eval_profiles(prof, F(3, 10), left=True) == 1
    assert eval_profiles(MaximalProfile(prof), F(3, 5)) == F(1, 2)
    assert eval_profiles(prof, 2) == 0
    with pytest.raises(DomainError):
        eval_profiles(prof, 0)
