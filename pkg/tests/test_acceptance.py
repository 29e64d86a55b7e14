"""Acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line, shown in the pytest summary.
Two criteria are stated with a sign that makes them unattainable; the
literal forms are run as strict expected failures next to the corrected
forms that pass.
"""

import numpy as np
import pytest

from wco.operators import (bilinear_cs_check, build_wco_matrix, certified_block,
                           conjugation_operator, cs_residual, hermitian_residual,
                           involution_residual, isometry_deviation, kernel_adjoint_check,
                           normal_residual, unitary_residual)
from wco.parse import parse_symbol
from wco.symbols import (ConjugationSpec, CsFamilyParams, LinearFractionalMap,
                         RationalFunction, lft_fixed_points, make_boundary_normal_family,
                         make_cs_family, make_hermitian_family, solve_boundary_basepoint)
from wco.theorems import (boundary_normal_params, classify_algebraic, draw_family,
                          match_cs_parameters, verify_case3_identity, verify_eq14)

ROUNDOFF = 1e-13


def disk(rng, radius):
    return complex(radius * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform()))


def draws(family, n, seed, radius=0.6):
    rng = np.random.default_rng(seed)
    return [draw_family(family, rng, radius)[:2] for _ in range(n)]


@pytest.fixture(scope="module")
def cs_draws():
    return draws("cs-2.3", 100, 2, radius=0.5)


@pytest.fixture(scope="module")
def unitary_draws():
    return draws("unitary", 50, 4)


@pytest.fixture(scope="module")
def hermitian_draws():
    rng = np.random.default_rng(5)
    out = []
    while len(out) < 50:
        params = {"b0": disk(rng, 0.5), "b1": rng.uniform(-0.5, 0.5), "b2": rng.uniform(-0.5, 0.5)}
        try:
            out.append((params, make_hermitian_family(**params)))
        except ValueError:
            continue
    return out


@pytest.fixture(scope="module")
def normal_draws():
    return draws("normal-interior", 50, 6)


@pytest.fixture(scope="module")
def boundary_positive():
    rng = np.random.default_rng(7)
    return [boundary_normal_params(rng, equal_bc=True) for _ in range(25)]


def test_conjugation_axioms(record_criterion):
    rng = np.random.default_rng(1)
    n = 96
    worst_inv = worst_iso = 0.0
    worst_bad = np.inf
    blocks = []
    for _ in range(100):
        p = disk(rng, 0.6)
        c_op = conjugation_operator(ConjugationSpec.at(p), n)
        rep = involution_residual(c_op, tol=1e-10)
        assert rep.passed
        worst_inv = max(worst_inv, rep.value)
        k = certified_block(c_op.u, 1e-11)
        blocks.append(k)
        v = np.zeros(n + 1, dtype=complex)
        v[: k + 1] = rng.standard_normal(k + 1) + 1j * rng.standard_normal(k + 1)
        v /= np.linalg.norm(v)
        worst_iso = max(worst_iso, isometry_deviation(c_op, v))

        shift = rng.uniform(0.1, np.pi) * rng.choice([-1, 1])
        lam_bad = ConjugationSpec.at(p).lam * np.exp(1j * shift)
        bad = conjugation_operator(ConjugationSpec.unchecked(p, lam_bad), n)
        worst_bad = min(worst_bad, involution_residual(bad, tol=1e-10).value)
    ok = worst_inv <= 1e-10 and worst_iso <= 1e-10 and worst_bad >= 1e-3
    record_criterion("1 conjugation axioms", ok,
                     f"max involution {worst_inv:.2e}, max isometry {worst_iso:.2e} "
                     f"(blocks {min(blocks)}..{max(blocks)}), min perturbed {worst_bad:.2e}")
    assert ok


def test_cs_family_positive(cs_draws, record_criterion):
    worst, decay_fail, floor_hits = 0.0, 0, 0
    for params, fam in cs_draws:
        t128 = build_wco_matrix(fam.psi, fam.phi, 128)
        rep = cs_residual(t128, conjugation_operator(fam.conjugation, 128), tol=1e-8)
        assert rep.passed, rep
        worst = max(worst, rep.value / rep.tolerance)
        # decay compared on one common block
        k = min(rep.block, 64)
        r128 = cs_residual(t128, conjugation_operator(fam.conjugation, 128), block=k).value
        t64 = build_wco_matrix(fam.psi, fam.phi, 64)
        r64 = cs_residual(t64, conjugation_operator(fam.conjugation, 64), block=k).value
        if r128 <= ROUNDOFF and r64 <= ROUNDOFF:
            floor_hits += 1
        elif r128 > 0.5 * r64:
            decay_fail += 1
    ok = decay_fail == 0
    record_criterion("2 cs family positive", ok,
                     f"max residual/tolerance {worst:.2e}; decay violations {decay_fail}, "
                     f"both at round-off floor {floor_hits}/100")
    assert ok


def test_cs_family_converse(cs_draws, record_criterion):
    rng = np.random.default_rng(3)
    worst, unmatched_pert = 0.0, 0
    for params, fam in cs_draws:
        res = match_cs_parameters(fam.psi, fam.phi, fam.conjugation)
        assert res.matched, res
        got = res.params
        want = CsFamilyParams(fam.conjugation.p, fam.conjugation.lam,
                              complex(params["a0"]), complex(params["a1"]), complex(params["c"]))
        dev = max(abs(got.a0 - want.a0), abs(got.a1 - want.a1), abs(got.c - want.c))
        worst = max(worst, dev)
        eps = 1e-3 * (1 + rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        bumped = fam.psi * RationalFunction([1.0, 0.0, eps], [1.0])
        if not match_cs_parameters(bumped, fam.phi, fam.conjugation).matched:
            unmatched_pert += 1
    ok = worst <= 1e-9 and unmatched_pert == 100
    record_criterion("3 cs family converse", ok,
                     f"max parameter deviation {worst:.2e}, perturbed not matched {unmatched_pert}/100")
    assert ok


def test_unitary(unitary_draws, record_criterion):
    worst_u = worst_cs = 0.0
    ok = True
    for params, fam in unitary_draws:
        t = build_wco_matrix(fam.psi, fam.phi, 128)
        u = unitary_residual(t, tol=1e-9)
        assert abs(fam.conjugation.p - np.conj(params["q"])) < 1e-15
        cs = cs_residual(t, conjugation_operator(fam.conjugation, 128), tol=1e-8)
        ok &= u.passed and cs.passed
        worst_u, worst_cs = max(worst_u, u.value), max(worst_cs, cs.value)
    record_criterion("4 unitary", ok, f"max unitary {worst_u:.2e}, max cs {worst_cs:.2e}")
    assert ok


def _hermitian_cs(fam, literal):
    lam = fam.info["lambda"]
    # the literal reading composes with lam*z; the working conjugation uses -lam*z
    spec = ConjugationSpec(0.0, -lam) if literal else fam.conjugation
    t = build_wco_matrix(fam.psi, fam.phi, 128)
    return hermitian_residual(t, tol=1e-9), cs_residual(t, conjugation_operator(spec, 128), tol=1e-8)


def test_hermitian(hermitian_draws, record_criterion):
    worst_h = worst_cs = 0.0
    ok = True
    for params, fam in hermitian_draws:
        h, cs = _hermitian_cs(fam, literal=False)
        ok &= h.passed and cs.passed
        worst_h, worst_cs = max(worst_h, h.value), max(worst_cs, cs.value)
    record_criterion("5 hermitian (conjugation J C_{-lam z})", ok,
                     f"max |T - T^H| {worst_h:.2e}, max cs {worst_cs:.2e}")
    assert ok


@pytest.mark.xfail(strict=True, reason="the literal rotation lam*z is not a symmetry; see ledger")
def test_hermitian_literal(hermitian_draws, record_criterion):
    fails, smallest = 0, np.inf
    for params, fam in hermitian_draws:
        _, cs = _hermitian_cs(fam, literal=True)
        if params["b1"] and not cs.passed:
            fails += 1
            smallest = min(smallest, cs.value)
    record_criterion("5 hermitian (literal J C_{lam z})", fails == 0,
                     f"cs fails on {fails}/50 draws, smallest failing residual {smallest:.2e}")
    assert fails == 0


def test_normal_interior(normal_draws, record_criterion):
    worst_n = worst_cs = max_q = 0.0
    ok = True
    for params, fam in normal_draws:
        q = fam.info["q"]
        max_q = max(max_q, abs(q))
        t = build_wco_matrix(fam.psi, fam.phi, 128)
        n = normal_residual(t, tol=1e-8)
        cs = cs_residual(t, conjugation_operator(fam.conjugation, 128), tol=1e-8)
        assert abs(fam.conjugation.p - q) == 0
        ok &= n.passed and cs.passed and abs(q) < 1
        worst_n, worst_cs = max(worst_n, n.value), max(worst_cs, cs.value)
    record_criterion("6 normal interior", ok,
                     f"max normal {worst_n:.2e}, max cs {worst_cs:.2e}, max |q| {max_q:.3f}")
    assert ok


def _kernel_pair(params):
    phi = LinearFractionalMap(params["a"], params["b"], params["c"], params["d"])
    w = -np.conj(phi.c) / np.conj(phi.d)
    return RationalFunction([1.0], [1.0, -np.conj(w)]), phi


def test_bc_dichotomy(boundary_positive, record_criterion):
    rng = np.random.default_rng(8)
    negative = [boundary_normal_params(rng, equal_bc=False) for _ in range(25)]
    worst_pos, least_neg = 0.0, np.inf
    ok = True
    for params, want in [(p, True) for p in boundary_positive] + [(p, False) for p in negative]:
        phi = LinearFractionalMap(params["a"], params["b"], params["c"], params["d"])
        assert any(fp.location == "boundary" for fp in lft_fixed_points(phi))
        e14 = verify_eq14(phi.a, phi.b, phi.c, phi.d, 128, tol=1e-8)
        psi, phi = _kernel_pair(params)
        nr = normal_residual(build_wco_matrix(psi, phi, 128), tol=1e-8)
        if want:
            ok &= e14.passed and nr.passed
            worst_pos = max(worst_pos, e14.value, nr.value)
        else:
            ok &= e14.value >= 1e-4 and nr.value >= 1e-4
            least_neg = min(least_neg, e14.value, nr.value)
    record_criterion("7 |b|=|c| dichotomy", ok,
                     f"positive max {worst_pos:.2e}, negative min {least_neg:.2e}")
    assert ok


def _basepoint_checks(params, sign):
    """Base point from ``b p (conj p - 1) = sign * c eta^2 conj p (1 - p)`` and its cs residual."""
    fam = make_boundary_normal_family(params["a"], params["b"], params["c"], params["d"])
    phi, eta = fam.phi, fam.info["eta"]
    b1 = -sign * phi.b * np.conj(eta) ** 2 / phi.c
    p = solve_boundary_basepoint(b1 / abs(b1), 0.5)[0]
    eq = abs(phi.b * p * (np.conj(p) - 1) - sign * phi.c * eta ** 2 * np.conj(p) * (1 - p))
    spec = ConjugationSpec.at(p * np.conj(eta))
    t = build_wco_matrix(fam.psi, fam.phi, 160)
    cs = cs_residual(t, conjugation_operator(spec, 160), tol=1e-7)
    return eq, cs


def test_boundary_conjugation(boundary_positive, record_criterion):
    worst_eq = worst_cs = 0.0
    ok = True
    for params in boundary_positive[:10]:
        eq, cs = _basepoint_checks(params, sign=-1)
        ok &= eq <= 1e-10 and cs.passed
        worst_eq, worst_cs = max(worst_eq, eq), max(worst_cs, cs.value)
    record_criterion("8 boundary conjugation (b p(conj p - 1) = -c eta^2 conj p (1 - p))", ok,
                     f"max equation residual {worst_eq:.2e}, max cs {worst_cs:.2e} at N=160")
    assert ok


@pytest.mark.xfail(strict=True, reason="the literal sign gives a base point that is not a symmetry")
def test_boundary_conjugation_literal(boundary_positive, record_criterion):
    worst_eq, worst_cs, fails = 0.0, 0.0, 0
    for params in boundary_positive[:10]:
        eq, cs = _basepoint_checks(params, sign=+1)
        fails += not (eq <= 1e-10 and cs.passed)
        worst_eq, worst_cs = max(worst_eq, eq), max(worst_cs, cs.value)
    record_criterion("8 boundary conjugation (literal sign)", fails == 0,
                     f"equation residual {worst_eq:.2e}, but cs up to {worst_cs:.2e}; {fails}/10 fail")
    assert fails == 0


def test_algebraic(record_criterion):
    rows = []
    ok = True

    def run(psi, phi, order=96):
        psi_f, phi_f = parse_symbol(psi), parse_symbol(phi)
        return psi_f, phi_f, classify_algebraic(psi_f, phi_f, order)

    psi, phi, v = run("5", "z")
    ok &= v.algebraic and v.degree == 1 and v.residual.passed
    rows.append(f"5,z deg {getattr(v, 'degree', None)}")
    positives = [(psi, phi, v)]

    psi, phi, v = run("1", "0")
    ok &= v.algebraic and abs(v.B - 1) < 1e-12 and v.C == 0 and v.residual.value <= 1e-10
    rows.append(f"1,0 |W^2-W| {v.residual.value:.1e}")
    positives.append((psi, phi, v))

    for w in ("exp(sin(z))", "exp(z)"):
        psi, phi, v = run(w, "-z")
        ok &= (v.algebraic and v.case == "involution-odd-weight" and abs(v.B) < 1e-12
               and abs(v.C - 1) < 1e-12 and v.residual.value <= 1e-8)
        rows.append(f"{w},-z |W^2-I| {v.residual.value:.1e}")
        positives.append((psi, phi, v))

    for w, m in (("exp(z^2)", "-z"), ("1+z", "e^(2 pi i/5) z")):
        _, _, v = run(w, m)
        ok &= not v.algebraic
        rows.append(f"{w},{m} not algebraic: {not v.algebraic}")

    worst17 = 0.0
    for psi, phi, v in positives:
        rep = verify_case3_identity(psi, phi, v, max_monomial=8, tol=1e-10)
        ok &= rep.passed
        worst17 = max(worst17, rep.value)
    rows.append(f"eq17 max {worst17:.1e}")
    record_criterion("9 algebraic suite", ok, "; ".join(rows))
    assert ok


def test_cross_pathway(cs_draws, unitary_draws, hermitian_draws, normal_draws,
                                    record_criterion):
    rng = np.random.default_rng(10)
    agree = total = negatives = 0
    pools = [cs_draws, unitary_draws, hermitian_draws, normal_draws]
    for pool in pools:
        for params, fam in pool:
            t = build_wco_matrix(fam.psi, fam.phi, 128)
            verdict = cs_residual(t, conjugation_operator(fam.conjugation, 128)).passed
            for _ in range(20):
                a, b = disk(rng, 0.6), disk(rng, 0.6)
                rep = bilinear_cs_check(fam.psi, fam.phi, fam.conjugation, a, b, 128)
                agree += rep.passed == verdict
                total += 1
    # negative controls: a weight from a different base point breaks the symmetry
    for params, fam in cs_draws[:25]:
        p = fam.conjugation.p
        other = make_cs_family(CsFamilyParams(p, fam.conjugation.lam, complex(params["a0"]) + 0.05,
                                              params["a1"], params["c"]))
        t = build_wco_matrix(other.psi, fam.phi, 128)
        verdict = cs_residual(t, conjugation_operator(fam.conjugation, 128)).passed
        for _ in range(4):
            a, b = disk(rng, 0.6), disk(rng, 0.6)
            rep = bilinear_cs_check(other.psi, fam.phi, fam.conjugation, a, b, 128)
            agree += rep.passed == verdict
            total += 1
            negatives += not verdict
    ok = agree == total
    record_criterion("10 cross-pathway agreement", ok,
                     f"{agree}/{total} verdicts agree ({negatives} on negative controls)")
    assert ok


def test_kernel_adjoint(cs_draws, unitary_draws, hermitian_draws, normal_draws,
                                     record_criterion):
    rng = np.random.default_rng(11)
    pool = [f for _, f in cs_draws[:15] + unitary_draws[:10] + hermitian_draws[:10]
            + normal_draws[:15]]
    worst = 0.0
    ok = True
    for fam in pool:
        rep = kernel_adjoint_check(fam.psi, fam.phi, disk(rng, 0.5), 128, tol=1e-9)
        ok &= rep.passed
        worst = max(worst, rep.value)
    record_criterion("11 kernel adjoint", ok, f"{len(pool)} draws, max deviation {worst:.2e}")
    assert ok
