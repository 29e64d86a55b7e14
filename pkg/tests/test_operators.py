import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wco.errors import DomainError, OrderMismatchError
from wco.operators import (apply_conjugation, bilinear_cs_check, build_wco_matrix,
                           certified_block,
                           conjugation_operator, cs_residual, hermitian_residual,
                           involution_residual, isometry_deviation, kernel_adjoint_check,
                           make_report, normal_residual, operator_norm, structure_residuals,
                           unitary_residual)
from wco.series import TruncatedSeries
from wco.symbols import (ConjugationSpec, CsFamilyParams, LinearFractionalMap,
                         RationalFunction, make_cs_family, make_unitary_family)

PSI = RationalFunction([1], [1, -0.3])
PHI = LinearFractionalMap(0.5, 0.2, -0.1, 1)
# mpmath entries of the matrix of W_{PSI,PHI}, see tests/oracles.py
ENTRIES = {(0, 0): 1.0, (2, 1): 0.226, (3, 3): 0.230056, (5, 2): 0.0182972,
           (7, 6): 0.0411678958272}


def test_entries_match_reference():
    t = build_wco_matrix(PSI, PHI, 16)
    for (i, j), want in ENTRIES.items():
        assert abs(t.entries[i, j] - want) < 1e-13
    assert t.closed_form and t.order == 16


def test_matrix_is_read_only_and_order_required():
    t = build_wco_matrix(PSI, PHI, 8)
    with pytest.raises(ValueError):
        t.entries[0, 0] = 2
    with pytest.raises(ValueError):
        build_wco_matrix(PSI, PHI)


def test_series_input_uses_empirical_tails():
    t = build_wco_matrix(PSI.to_series(24), PHI.to_series(24))
    assert not t.closed_form
    assert t.column_tails.shape == (25,) and np.all(np.isfinite(t.column_tails))


def test_matrix_acts_as_weighted_composition():
    n = 60
    t = build_wco_matrix(PSI, PHI, n)
    f = TruncatedSeries(0.5 ** np.arange(n + 1))  # 1/(1 - z/2)
    img = TruncatedSeries(t.entries @ f.coeffs)
    z = np.array([0.1, -0.2j, 0.3 + 0.1j])
    assert np.allclose(img(z), PSI(z) / (1 - PHI(z) / 2), atol=1e-12)


def test_composition_multiplies_matrices():
    # W_{psi1,phi1} W_{psi2,phi2} = W_{psi1 * psi2 o phi1, phi2 o phi1}
    n = 40
    phi1, phi2 = LinearFractionalMap(0.5, 0, 0, 1), LinearFractionalMap(0.3, 0.2, 0, 1)
    psi2 = RationalFunction([1, 0.2], [1])
    t1 = build_wco_matrix(PSI, phi1, n)
    t2 = build_wco_matrix(psi2, phi2, n)
    prod = build_wco_matrix(PSI * RationalFunction([1, 0.1], [1]), LinearFractionalMap(0.15, 0.2, 0, 1), n)
    assert np.max(np.abs((t1.entries @ t2.entries - prod.entries)[:20, :20])) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_operator_norm_matches_svd(seed):
    rng = np.random.default_rng(seed)
    m = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
    m = m @ np.diag(0.3 ** np.arange(12))
    assert abs(operator_norm(m, iterations=400) - np.linalg.norm(m, 2)) < 1e-8 * np.linalg.norm(m, 2)


def test_operator_norm_of_zero_and_deterministic():
    assert operator_norm(np.zeros((3, 3))) == 0.0
    m = np.arange(9.0).reshape(3, 3)
    assert operator_norm(m) == operator_norm(m)


def test_conjugation_with_trivial_base_point_and_minus_one_is_identity():
    c = conjugation_operator(ConjugationSpec(0, -1), 12)
    assert np.allclose(c.u.entries, np.eye(13))
    v = np.arange(13) * (1 + 1j)
    assert np.allclose(c(v), np.conj(v))


def test_conjugation_axioms_hold():
    c = conjugation_operator(ConjugationSpec.at(0.4 + 0.3j), 96)
    assert involution_residual(c).passed
    # vectors supported on a block whose images are resolved by the section
    k = certified_block(c.u, 1e-11)
    assert k >= 8
    v = np.zeros(97, dtype=complex)
    v[: k + 1] = np.random.default_rng(0).standard_normal(k + 1)
    assert isometry_deviation(c, v) < 1e-10 * np.linalg.norm(v)


def test_unchecked_rotation_breaks_the_involution():
    p = 0.4 + 0.3j
    bad = ConjugationSpec.unchecked(p, np.conj(p) / p * np.exp(0.3j))
    rep = involution_residual(conjugation_operator(bad, 64))
    assert not rep.passed and rep.value > 1e-3


def test_apply_conjugation_checks_length():
    c = conjugation_operator(ConjugationSpec.at(0), 8)
    with pytest.raises(OrderMismatchError):
        apply_conjugation(c, np.ones(5))


def test_cs_family_is_complex_symmetric():
    spec = ConjugationSpec.at(0.3 - 0.2j)
    fam = make_cs_family(CsFamilyParams(spec.p, spec.lam, 0.1 + 0.2j, 0.3, 0.8))
    t = build_wco_matrix(fam.psi, fam.phi, 128)
    c = conjugation_operator(spec, 128)
    rep = cs_residual(t, c)
    assert rep.passed and rep.value < 1e-10
    wrong = conjugation_operator(ConjugationSpec.at(0.1), 128)
    assert not cs_residual(t, wrong).passed


def test_unitary_family_residuals():
    fam = make_unitary_family(0.5, 1, 1)
    t = build_wco_matrix(fam.psi, fam.phi, 128)
    assert unitary_residual(t, 1e-9).passed
    # a unitary involution is also Hermitian
    assert hermitian_residual(t).passed
    fam = make_unitary_family(0.5, 1j, 1)
    t = build_wco_matrix(fam.psi, fam.phi, 128)
    assert normal_residual(t).passed
    reps = structure_residuals(t)
    assert sorted(reps) == ["hermitian", "normal", "unitary"]
    assert reps["unitary"].passed and not reps["hermitian"].passed


def test_non_normal_operator_fails_normality():
    t = build_wco_matrix(RationalFunction.constant(1), LinearFractionalMap(0.5, 0, 0, 1), 64)
    assert hermitian_residual(t).passed
    t = build_wco_matrix(PSI, PHI, 64)
    assert not normal_residual(t).passed and not hermitian_residual(t).passed


def test_report_tolerance_is_inflated_by_tail():
    rep = make_report("x", 1e-9, 64, 1e-8, 1e-10)
    assert rep.tolerance == pytest.approx(1e-7) and rep.passed
    rep = make_report("x", 1.0, 64, float("inf"), 1e-10)
    assert not rep.passed
    d = rep.to_dict()
    json.dumps(d, allow_nan=False)
    assert d["tail_bound"] == "inf" and d["verdict"] == "fail"
    neg = make_report("neg", 0.5, 64, 0.0, 1e-4, upper=True, z=0.1j)
    assert neg.passed and neg.to_dict()["detail"]["z"] == [0.0, 0.1]


def test_kernel_adjoint_identity():
    rep = kernel_adjoint_check(PSI, PHI, 0.2 + 0.1j, 128)
    assert rep.passed and rep.value < 1e-9


def test_kernel_adjoint_rejects_unresolved_tail():
    slow = LinearFractionalMap(0.9, 0.09, 0, 1)
    with pytest.raises(DomainError):
        kernel_adjoint_check(RationalFunction([1], [1, -0.99]), slow, 0.5, 16, tol=1e-12)


def test_bilinear_pathway_agrees_with_matrix_pathway():
    spec = ConjugationSpec.at(0.4)
    fam = make_cs_family(CsFamilyParams(0.4, spec.lam, 0.1, 0.2, 0.5))
    assert bilinear_cs_check(fam.psi, fam.phi, spec, 0.2, 0.3j, 128, 1e-9).passed
    other = ConjugationSpec.at(0.3j)
    assert not bilinear_cs_check(fam.psi, fam.phi, other, 0.2, 0.3j, 128, 1e-9).passed
