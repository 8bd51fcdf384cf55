import math
from fractions import Fraction as F

import numpy as np
import pytest

from marclab.errors import DomainError, PreconditionError
from marclab.norms import norm_M_phi, norm_m_phi
from marclab.phi import PowerLogPhi, TabulatedPhi
from marclab.stepfn import random_step_function, rearrangement
from marclab.superadditivity import (defect_csv, defect_sweep, family_invariants, gen_counterexample_M,
                                     gen_counterexample_m, l1_equivalence_check, superadditivity_defect)

SQRT = PowerLogPhi(0.5)


def test_weak_family_members_have_unit_norm():
    fam = gen_counterexample_m(SQRT, 4, t0=1.0)
    assert fam.m == 4
    assert [norm_m_phi(f, SQRT).value for f in fam.functions] == pytest.approx([1.0] * 4, rel=1e-15)


def test_sum_rearrangement_is_the_layered_profile():
    fam = gen_counterexample_m(SQRT, 5)
    prof = rearrangement(fam.total)
    a = fam.tails
    assert prof.breakpoints == tuple(reversed(a))
    assert list(prof.values) == [1 / SQRT(float(r)) for r in reversed(fam.radii)]


def test_weak_sum_norm_bounded_by_doubling_constant():
    fam = gen_counterexample_m(SQRT, 12)
    assert norm_m_phi(fam.total, SQRT).value <= math.sqrt(2) + 1e-9


def test_single_member_has_unit_defect():
    for fam, phi in ((gen_counterexample_m(SQRT, 1), SQRT), (gen_counterexample_M(SQRT, 1), SQRT)):
        for g in (0.5, 1.0, 2.0):
            assert superadditivity_defect(fam, phi, g).defect == pytest.approx(1.0, rel=1e-12)


def test_weak_defect_bound():
    fam = gen_counterexample_m(SQRT, 10)
    assert superadditivity_defect(fam, SQRT, 1.0).defect >= 10 / math.sqrt(2) - 1e-9


def test_maximal_family():
    fam = gen_counterexample_M(SQRT, 6)
    assert [norm_M_phi(f, SQRT).value for f in fam.functions] == pytest.approx([1.0] * 6, rel=1e-12)
    assert norm_M_phi(fam.total, SQRT).value <= 4 + 1e-9
    assert all(c.ok for c in family_invariants(fam, SQRT))


def test_maximal_family_innermost_piece():
    fam = gen_counterexample_M(SQRT, 2)
    assert next(c for c in family_invariants(fam, SQRT) if c.name == "innermost_sup_is_one").ok


def test_maximal_defect_exceeds_four_at_sixteen():
    fam = gen_counterexample_M(SQRT, 16)
    assert superadditivity_defect(fam, SQRT, 1.0).defect >= 4 - 1e-9


def test_identity_phi_is_refused_with_diagnosis():
    with pytest.raises(PreconditionError, match="positive and finite"):
        gen_counterexample_M(PowerLogPhi(1.0), 4)


def test_preconditions():
    with pytest.raises(PreconditionError):
        gen_counterexample_m(PowerLogPhi(-0.5), 3)
    with pytest.raises(PreconditionError):
        gen_counterexample_M(PowerLogPhi(2.0), 3)
    with pytest.raises(DomainError):
        gen_counterexample_m(SQRT, 0)
    with pytest.raises(DomainError):
        superadditivity_defect(gen_counterexample_m(SQRT, 2), SQRT, 0.0)


@pytest.mark.parametrize("phi", [PowerLogPhi(0.3), PowerLogPhi(0.5, 0.3), PowerLogPhi(0.9, -0.05),
                                 PowerLogPhi(0.5, 0, "inf")])
def test_invariants_across_quasiconcave_phi(phi):
    for m in (2, 5, 9):
        for fam in (gen_counterexample_m(phi, m), gen_counterexample_M(phi, m)):
            checks = family_invariants(fam, phi)
            assert all(c.ok for c in checks), [c for c in checks if not c.ok]


def test_sweep_rows_and_monotone_defect():
    rows = defect_sweep(SQRT, "M", range(2, 17), (1.0,))
    defects = [r[3] for r in rows]
    assert len(rows) == 15 and all(b >= a for a, b in zip(defects, defects[1:]))
    assert len(defect_sweep(SQRT, "m", range(1, 13), (1.0,))) == 12
    assert defect_csv([]) == "m,gamma,sum_norm,defect\n"


def test_l1_equivalence_for_identity_and_scaled_identity():
    rng = np.random.default_rng(0)
    samples = [random_step_function(rng, 5) for _ in range(20)]
    rep = l1_equivalence_check(PowerLogPhi(1.0), samples)
    assert rep.ok and rep.kappa1 == pytest.approx(1.0) and rep.kappa2 == pytest.approx(1.0)
    rep3 = l1_equivalence_check(PowerLogPhi(1.0, scale=3.0), samples)
    assert rep3.kappa1 == pytest.approx(3.0) and rep3.kappa2 == pytest.approx(3.0)


def test_l1_equivalence_for_tabulated_positive_limit():
    rng = np.random.default_rng(1)
    phi = TabulatedPhi((0.2, 0.8), (0.2, 0.5), 1.0, left_tail="proportional")
    samples = [random_step_function(rng, 6) for _ in range(100)]
    rep = l1_equivalence_check(phi, samples)
    assert rep.ok and 0 < rep.kappa1 <= rep.kappa2 < math.inf
    with pytest.raises(PreconditionError):
        l1_equivalence_check(SQRT, samples)
