"""Theorem-level checks built on the operator residuals.

This module matches weights and maps to the complex symmetric template,
verifies the adjoint identity behind the boundary-normal family, decides
algebraicity of degree at most two, and assembles per-family certificates.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, SAFETY_RADIUS
from .errors import ConstraintError, DomainError, NumericalFailure
from .operators import (ResidualReport, annihilation_residual, as_series,
                        bilinear_cs_check, build_wco_matrix, conjugation_operator,
                        cs_residual, hermitian_residual, involution_residual,
                        kernel_adjoint_check, make_report, normal_residual,
                        operator_norm, unitary_residual)
from .series import TruncatedSeries, compose_tail_bound, series_compose, series_log
from .symbols import (ConjugationSpec, CsFamilyParams, LinearFractionalMap,
                      RationalFunction, alpha, cross_adjoint, lft_compose,
                      lft_fixed_points, lft_is_disk_selfmap, make_boundary_normal_family,
                      make_cs_family, make_hermitian_family, make_normal_interior_family,
                      make_unitary_family)

FAMILIES = ("cs-2.3", "unitary", "hermitian", "normal-interior", "boundary-normal", "algebraic")


# ---------------------------------------------------------------------------
# parameter matching
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CsMatch:
    matched: bool
    params: CsFamilyParams | None = None
    deviation: float = math.inf
    reason: str = ""


def match_cs_parameters(psi, phi, spec, order=64, tol=DEFAULT.match):
    """Recover ``(a0, a1, c)`` placing ``(psi, phi)`` in the complex symmetric family.

    The rotation and base point are fixed by ``spec``.  The weight must be
    reciprocal-linear, i.e. its coefficients geometric with ratio
    ``rho = psi_1 / psi_0``.  Parameters are recovered in closed form and
    then checked by rebuilding both symbols.
    """
    psi_s = psi if isinstance(psi, TruncatedSeries) else psi.to_series(order)
    coeffs = psi_s.coeffs
    scale = float(np.abs(coeffs).max())
    if scale == 0 or abs(coeffs[0]) <= tol * scale:
        return CsMatch(False, reason="weight vanishes at the origin")
    rho = coeffs[1] / coeffs[0] if coeffs.size > 1 else 0.0
    geo = coeffs[0] * np.power(rho, np.arange(coeffs.size), dtype=complex)
    if np.max(np.abs(coeffs - geo)) > tol * scale:
        return CsMatch(False, reason="weight is not reciprocal-linear")
    p, lam = spec.p, spec.lam
    lb = np.conj(lam)
    den = lb - rho * p
    if abs(den) <= 1e-14:
        return CsMatch(False, reason="weight ratio incompatible with the base point")
    a0 = (p - rho) / den
    d0, d1 = 1.0 - a0 * p, p - lb * a0
    c = coeffs[0] * d0
    probes = np.array([0.0, 0.5, -0.5, 0.5j, -0.5j])
    zs = probes[np.argmax(np.abs(p - lb * probes))]
    a1 = (phi(zs) - a0) * (d0 - d1 * zs) / (p - lb * zs)
    params = CsFamilyParams(p, lam, complex(a0), complex(a1), complex(c))
    try:
        fam = make_cs_family(params)
    except ConstraintError as exc:
        return CsMatch(False, params, reason=exc.constraint)
    n = psi_s.order
    dev_psi = float(np.max(np.abs(fam.psi.to_series(n).coeffs - coeffs)))
    pts = 0.6 * np.exp(2j * np.pi * np.arange(16) / 16)
    dev_phi = float(np.max(np.abs(fam.phi(pts) - phi(pts))))
    deviation = max(dev_psi / scale, dev_phi)
    if deviation > tol:
        return CsMatch(False, params, deviation, "reconstruction deviates")
    return CsMatch(True, params, deviation)


# ---------------------------------------------------------------------------
# adjoint identity for maps with |b| = |c|
# ---------------------------------------------------------------------------


def eq14_weights(phi):
    """The weights on the two sides of the identity ``W_L C_{phi* o phi} = W_R C_{phi o phi*}``."""
    a, b, c, d = phi.a, phi.b, phi.c, phi.d
    ad2 = abs(d) ** 2
    left = RationalFunction([ad2], [ad2 - abs(b) ** 2, -(np.conj(b) * a - np.conj(d) * c)])
    right = RationalFunction([ad2], [ad2 - abs(c) ** 2, -(np.conj(b) * d - c * np.conj(a))])
    return left, right


def verify_eq14(a, b, c, d, order=128, tol=1e-8):
    """Operator-norm distance between the two sides of the adjoint identity.

    Both sides are exact finite sections (weights times composition), so
    no tail enters; ``|b| = |c|`` is required for them to agree.  The
    identity is algebraic, so only the expansions need to exist; whether
    ``phi`` maps the disk into itself is recorded in the report detail.
    """
    phi = LinearFractionalMap(a, b, c, d)
    if phi.d == 0:
        raise ConstraintError("d-nonzero", "d must be nonzero")
    left_w, right_w = eq14_weights(phi)
    for side, w in (("left", left_w), ("right", right_w)):
        if w.radius < 1.0 + 1e-9:
            raise DomainError(f"the {side} weight has a pole in the closed disk")
    ps = cross_adjoint(phi)
    lhs = build_wco_matrix(left_w, lft_compose(ps, phi), order)
    rhs = build_wco_matrix(right_w, lft_compose(phi, ps), order)
    diff = lhs.entries - rhs.entries
    return make_report("eq14", operator_norm(diff), order, 0.0, tol, block=order,
                       frobenius=float(np.linalg.norm(diff)),
                       selfmap=lft_is_disk_selfmap(phi))


# ---------------------------------------------------------------------------
# algebraicity of degree <= 2
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlgebraicCertificate:
    """``T^2 - B T - C I = 0`` (degree 2) or ``T - B I = 0`` (degree 1)."""

    degree: int
    A: complex
    B: complex
    C: complex
    case: str
    residual: ResidualReport | None = None
    data: dict = field(default_factory=dict)
    algebraic: bool = True


@dataclass(frozen=True)
class NotAlgebraic:
    reason: str
    algebraic: bool = False
    data: dict = field(default_factory=dict)


def _max_tail(f):
    return float(np.max(np.abs(f.coeffs[1:]))) if f.order else 0.0


def _evaluate(f, z):
    return complex(f(z))


def _involution_fixed_point(phi, phi_s, tol=1e-13):
    if isinstance(phi, LinearFractionalMap):
        inside = [fp.value for fp in lft_fixed_points(phi) if fp.location == "interior"]
        if inside:
            return inside[0]
        raise NumericalFailure("the involution has no fixed point in the open disk")
    f = phi if callable(phi) else phi_s
    z = 0j
    for _ in range(500):
        z_new = 0.5 * (z + _evaluate(f, z))
        if abs(z_new - z) <= tol:
            z = z_new
            break
        z = z_new
    # Newton polish on phi(z) - z with a numerical derivative
    for _ in range(5):
        h = 1e-6
        g = _evaluate(f, z) - z
        dg = (_evaluate(f, z + h) - _evaluate(f, z - h)) / (2 * h) - 1.0
        if dg == 0:
            break
        z = z - g / dg
    if not abs(z) < 1.0 or abs(_evaluate(f, z) - z) > 1e-9:
        raise NumericalFailure("fixed point of the involution not found in the open disk")
    return z


def _compose_exact(phi, psi_s, phi_s, order):
    """Series of ``psi o phi`` and ``phi o phi``, using closed forms where possible."""
    psi_phi = series_compose(psi_s, phi_s)
    if isinstance(phi, LinearFractionalMap):
        phi2 = lft_compose(phi, phi).to_series(order)
    else:
        phi2 = series_compose(phi_s, phi_s)
    return psi_phi, phi2


def classify_algebraic(psi, phi, order=96, tol=1e-8, config=DEFAULT):
    """Decide whether ``W_{psi,phi}`` is algebraic of degree at most 2.

    Cases, tried in order: constant ``phi``; ``phi`` the identity with
    constant ``psi``; ``phi`` an involution with ``psi o alpha_p`` of the
    form ``c exp(odd)``.  Every positive verdict is re-verified on the
    finite section.
    """
    psi_s, phi_s = as_series(psi, order), as_series(phi, order)
    if np.max(np.abs(psi_s.coeffs)) <= config.log_zero:
        raise DomainError("the weight vanishes identically")
    t = build_wco_matrix(psi, phi, order)

    if _max_tail(phi_s) <= config.constant:
        phi0 = complex(phi_s.coeffs[0])
        b = _evaluate(psi, phi0)
        cert = AlgebraicCertificate(2, 1.0, b, 0.0, "constant-phi", data={"phi0": phi0})
        return _verified(cert, t, tol, config)

    ident = np.zeros(order + 1, dtype=complex)
    ident[1] = 1.0
    if np.max(np.abs(phi_s.coeffs - ident)) <= config.constant:
        if _max_tail(psi_s) <= config.constant:
            cert = AlgebraicCertificate(1, 0.0, complex(psi_s.coeffs[0]), 0.0, "identity")
            return _verified(cert, t, tol, config)
        return NotAlgebraic("identity map with a nonconstant weight")

    if isinstance(phi, LinearFractionalMap):
        phi2 = lft_compose(phi, phi)
        involution = phi2.is_identity(config.involution)
    else:
        phi2_s = series_compose(phi_s, phi_s)
        involution = np.max(np.abs(phi2_s.coeffs - ident)) <= config.involution
    if not involution:
        return NotAlgebraic("phi is not constant, the identity, or an involution")

    p = _involution_fixed_point(phi, phi_s)
    psi_p = _evaluate(psi, p)
    if abs(psi_p) <= config.log_zero:
        return NotAlgebraic("weight vanishes at the fixed point", data={"p": p})
    a_s = alpha(p).to_series(order)
    moved = series_compose(psi_s, a_s)
    g = series_log(moved)
    c0 = cmath.exp(g.coeffs[0])
    even = g.coeffs[2::2]
    even_dev = float(np.max(np.abs(even))) if even.size else 0.0
    if even_dev > config.involution:
        return NotAlgebraic("log of the transported weight has even terms",
                            data={"p": p, "even_deviation": even_dev})
    prod = psi_s * series_compose(psi_s, phi_s)
    c_val = complex(prod.coeffs[0])
    if _max_tail(prod) > config.involution * max(1.0, abs(c_val)):
        raise NumericalFailure("psi * (psi o phi) is not constant to tolerance")
    cert = AlgebraicCertificate(2, 1.0, 0.0, c_val, "involution-odd-weight",
                                data={"p": p, "c": c0, "even_deviation": even_dev})
    return _verified(cert, t, tol, config)


def _verified(cert, t, tol, config):
    rep = annihilation_residual(t, cert.B, cert.C, cert.degree, tol, config=config)
    return AlgebraicCertificate(cert.degree, cert.A, cert.B, cert.C, cert.case, rep, cert.data)


def verify_case3_identity(psi, phi, cert, max_monomial=8, order=96, tol=1e-10):
    """Max over ``n <= max_monomial`` of the coefficient deviation in
    ``psi (psi o phi) (phi o phi)^n = B psi phi^n + C z^n``.
    """
    psi_s, phi_s = as_series(psi, order), as_series(phi, order)
    b, c = cert.B, (cert.C if cert.degree == 2 else 0.0)
    psi_phi, phi2 = _compose_exact(phi, psi_s, phi_s, order)
    base = psi_s * psi_phi
    worst = 0.0
    for n in range(max_monomial + 1):
        lhs = base * phi2 ** n
        rhs = b * psi_s * phi_s ** n + TruncatedSeries.monomial(n, order, c)
        worst = max(worst, float(np.max(np.abs((lhs - rhs).coeffs))))
    phi0 = abs(phi_s.coeffs[0])
    tail = 0.0
    if phi0 > 0:
        sup = phi.max_modulus(1.0) if hasattr(phi, "max_modulus") else float(np.abs(phi_s.coeffs).sum())
        tail = compose_tail_bound(psi_s, min(sup, 1.0)) * float(np.abs(psi_s.coeffs).sum())
    return make_report("eq17", worst, order, tail, tol, max_monomial=max_monomial)


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertificateReport:
    family: str
    params: dict
    order: int
    checks: tuple
    error: str | None = None

    @property
    def passed(self):
        return bool(self.checks) and all(c.passed for c in self.checks)

    def to_dict(self):
        out = {"family": self.family, "params": {k: _param_json(v) for k, v in sorted(self.params.items())},
               "order": self.order, "verdict": "pass" if self.passed else "fail",
               "checks": [c.to_dict() for c in self.checks]}
        if self.error:
            out["error"] = self.error
        return out


def _param_json(v):
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_param_json(x) for x in v]
    return v


def _rejection(name, message, order):
    return ResidualReport(name, math.nan, order, math.nan, math.nan, False,
                          detail={"message": message})


def _standard_checks(fam, order, tol, rng, point_radius=0.5):
    t = build_wco_matrix(fam.psi, fam.phi, order)
    c_op = conjugation_operator(fam.conjugation, order)
    checks = [involution_residual(c_op, tol), cs_residual(t, c_op, tol)]
    w = _disk_point(rng, point_radius)
    try:
        checks.append(kernel_adjoint_check(fam.psi, fam.phi, w, order, max(tol, 1e-9)))
    except DomainError as exc:
        checks.append(_rejection("kernel-adjoint", str(exc), order))
    a, b = _disk_point(rng, point_radius), _disk_point(rng, point_radius)
    checks.append(bilinear_cs_check(fam.psi, fam.phi, fam.conjugation, a, b, order, tol))
    return t, checks


def _disk_point(rng, radius):
    r = radius * math.sqrt(rng.uniform())
    return complex(r * cmath.exp(2j * math.pi * rng.uniform()))


def _get(params, key, default=None):
    if key in params:
        return complex(params[key]) if params[key] is not None else None
    if default is None:
        raise ValueError(f"missing parameter {key!r}")
    return complex(default)


def certify_theorem(family, params, order=128, tol=1e-8, seed=0, config=DEFAULT):
    """Run every check appropriate to ``family`` for one parameter set.

    Constructor rejections become a single failing check named after the
    violated constraint.  Unknown families and missing parameters raise
    :class:`ValueError`.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    rng = np.random.default_rng(seed)
    try:
        checks = _FAMILY_CHECKS[family](params, order, tol, rng, config)
    except ConstraintError as exc:
        checks = [_rejection(exc.constraint, str(exc), order)]
    except (DomainError, NumericalFailure) as exc:
        return CertificateReport(family, dict(params), order,
                                 (_rejection("domain", str(exc), order),), str(exc))
    return CertificateReport(family, dict(params), order, tuple(checks))


def _check_cs(params, order, tol, rng, config):
    p = _get(params, "p", 0.0)
    lam = params.get("lam")
    spec = ConjugationSpec.at(p) if lam is None else ConjugationSpec(p, complex(lam))
    fam = make_cs_family(CsFamilyParams(spec.p, spec.lam, _get(params, "a0"),
                                        _get(params, "a1"), _get(params, "c")))
    return _standard_checks(fam, order, tol, rng)[1]


def _check_unitary(params, order, tol, rng, config):
    fam = make_unitary_family(_get(params, "q"), _get(params, "mu1"), _get(params, "mu2"))
    t, checks = _standard_checks(fam, order, tol, rng)
    return [unitary_residual(t, tol)] + checks


def _check_hermitian(params, order, tol, rng, config):
    fam = make_hermitian_family(_get(params, "b0"), _get(params, "b1"), _get(params, "b2"))
    t, checks = _standard_checks(fam, order, tol, rng)
    return [hermitian_residual(t, tol)] + checks


def _check_normal_interior(params, order, tol, rng, config):
    fam = make_normal_interior_family(_get(params, "p"), _get(params, "gamma"),
                                      _get(params, "delta"))
    q = fam.info["q"]
    inside = make_report("q-in-disk", abs(q), order, 0.0, 1.0 - 1e-12, q=q)
    t, checks = _standard_checks(fam, order, tol, rng)
    return [inside, normal_residual(t, tol)] + checks


def _check_boundary_normal(params, order, tol, rng, config):
    a, b, c, d = (_get(params, k) for k in "abcd")
    r = float(params.get("r", 0.5))
    phi = LinearFractionalMap(a, b, c, d)
    bc = make_report("lemma-bc-|b|=|c|", abs(abs(phi.b) - abs(phi.c)), order, 0.0,
                     config.normal_bc)
    if not bc.passed:
        return [bc]
    fam = make_boundary_normal_family(a, b, c, d, r)
    p, b1 = fam.info["p"], fam.info["b1"]
    base_eq = abs(b1 * p * (np.conj(p) - 1.0) + np.conj(p) * (1.0 - p))
    basepoint = make_report("basepoint-equation", base_eq, order, 0.0, config.basepoint,
                            p=p, eta=fam.info["eta"])
    t, checks = _standard_checks(fam, order, tol, rng)
    return [bc, verify_eq14(a, b, c, d, order, tol), normal_residual(t, tol), basepoint] + checks


def _check_algebraic(params, order, tol, rng, config):
    psi, phi = algebraic_symbols(params)
    verdict = classify_algebraic(psi, phi, order, tol, config)
    if not verdict.algebraic:
        return [ResidualReport("classification", math.nan, order, 0.0, 0.0, False,
                               detail={"reason": verdict.reason})]
    cls = ResidualReport("classification", float(verdict.degree), order, 0.0, 0.0, True,
                         detail={"case": verdict.case, "degree": verdict.degree,
                                 "B": verdict.B, "C": verdict.C})
    return [cls, verdict.residual, verify_case3_identity(psi, phi, verdict, order=order,
                                                         tol=max(1e-10, tol * 1e-2))]


def algebraic_symbols(params):
    """Weight and map for the algebraic family from expressions or a fixed point."""
    if "psi" in params or "phi" in params:
        from .parse import parse_symbol
        return parse_symbol(str(params["psi"])), parse_symbol(str(params["phi"]))
    fam = involution_pair(_get(params, "p"), params.get("odd", (0.4,)), params.get("c", 1.0))
    return fam.psi, fam.phi


_FAMILY_CHECKS = {
    "cs-2.3": _check_cs,
    "unitary": _check_unitary,
    "hermitian": _check_hermitian,
    "normal-interior": _check_normal_interior,
    "boundary-normal": _check_boundary_normal,
    "algebraic": _check_algebraic,
}


# ---------------------------------------------------------------------------
# random parameter draws
# ---------------------------------------------------------------------------


def _unit(rng):
    return complex(cmath.exp(2j * math.pi * rng.uniform()))


def boundary_normal_params(rng, equal_bc=True, min_gap=0.05):
    """Random self-map with a boundary fixed point.

    Built from ``w -> A w + B`` on the right half-plane (``A > 0``,
    ``Re B >= 0``) transported to the disk and rotated so the fixed point
    sits at a random ``eta``.  ``|b| = |c|`` exactly when ``A = 1`` or
    ``Re B = 0``; otherwise the draw is kept only if ``||b| - |c|| >= min_gap``.
    """
    for _ in range(1000):
        if equal_bc:
            if rng.uniform() < 0.5:
                A, B = 1.0, complex(rng.uniform(0.0, 1.5), rng.uniform(-1.5, 1.5))
            else:
                A, B = float(rng.uniform(0.3, 3.0)), complex(0.0, rng.uniform(-1.5, 1.5))
        else:
            A = float(rng.choice([rng.uniform(0.2, 0.8), rng.uniform(1.25, 4.0)]))
            B = complex(rng.uniform(0.2, 2.0), rng.uniform(-1.5, 1.5))
        m = np.array([A - B + 1, A + B - 1, A - B - 1, A + B + 1])
        if np.max(np.abs(m)) == 0:
            continue
        eta = _unit(rng)
        a, b, c, d = m[0], eta * m[1], m[2] * np.conj(eta), m[3]
        try:
            phi = LinearFractionalMap(a, b, c, d)
        except ConstraintError:
            continue
        if phi.is_identity(1e-6) or abs(phi.b) < 1e-3:
            continue
        gap = abs(abs(phi.b) - abs(phi.c))
        if equal_bc or gap >= min_gap:
            return {"a": phi.a, "b": phi.b, "c": phi.c, "d": phi.d}
    raise NumericalFailure("could not draw a boundary map")


def random_params(family, rng, safety_radius=SAFETY_RADIUS):
    """One random parameter set for ``family`` (not yet validated)."""
    if family == "cs-2.3":
        p = _disk_point(rng, safety_radius)
        return {"p": p, "a0": _disk_point(rng, safety_radius),
                "a1": _disk_point(rng, 1.0 - safety_radius) or 0.1,
                "c": complex(rng.uniform(0.2, 1.0)) * _unit(rng)}
    if family == "unitary":
        return {"q": _disk_point(rng, safety_radius), "mu1": _unit(rng), "mu2": _unit(rng)}
    if family == "hermitian":
        return {"b0": _disk_point(rng, 0.3), "b1": float(rng.uniform(0.05, 0.5)) * rng.choice([-1, 1]),
                "b2": float(rng.uniform(-0.5, 0.5))}
    if family == "normal-interior":
        return {"p": _disk_point(rng, 0.5), "gamma": _unit(rng),
                "delta": _disk_point(rng, 0.8) or 0.5}
    if family == "boundary-normal":
        return boundary_normal_params(rng)
    if family == "algebraic":
        return {"p": _disk_point(rng, 0.5),
                "odd": [_disk_point(rng, 0.5), _disk_point(rng, 0.2)]}
    raise ValueError(f"unknown family {family!r}")


def draw_family(family, rng, safety_radius=SAFETY_RADIUS, max_tries=1000):
    """Rejection-sample parameters whose constructor accepts them.

    For the complex symmetric family the weight's decay ratio must also
    stay below ``safety_radius``.  Returns ``(params, family, rejected)``.
    """
    for rejected in range(max_tries):
        params = random_params(family, rng, safety_radius)
        try:
            fam = build_family(family, params)
        except (ConstraintError, DomainError):
            continue
        if family == "cs-2.3" and fam.info["decay_ratio"] > safety_radius:
            continue
        return params, fam, rejected
    raise NumericalFailure(f"no admissible draw for {family!r}")


def build_family(family, params):
    if family == "cs-2.3":
        spec = ConjugationSpec.at(complex(params["p"]))
        return make_cs_family(CsFamilyParams(spec.p, spec.lam, params["a0"], params["a1"],
                                             params["c"]))
    if family == "unitary":
        return make_unitary_family(params["q"], params["mu1"], params["mu2"])
    if family == "hermitian":
        return make_hermitian_family(params["b0"], params["b1"], params["b2"])
    if family == "normal-interior":
        return make_normal_interior_family(params["p"], params["gamma"], params["delta"])
    if family == "boundary-normal":
        return make_boundary_normal_family(params["a"], params["b"], params["c"], params["d"],
                                           params.get("r", 0.5))
    if family == "algebraic":
        return involution_pair(params["p"], params.get("odd", (0.4,)), params.get("c", 1.0))
    raise ValueError(f"unknown family {family!r}")


def involution_pair(p, odd=(0.4,), c=1.0):
    """Weight ``c exp(odd(alpha_p(z)))`` with ``phi = alpha_p o (-alpha_p)``.

    ``odd`` lists the coefficients of ``z, z^3, z^5, ...``.
    """
    from .symbols import AnalyticFunction, Family
    from .series import series_exp

    p = complex(p)
    a = alpha(p)
    phi = lft_compose(a, LinearFractionalMap(1.0, -p, -np.conj(p), 1.0))
    odd = np.asarray(odd, dtype=complex)
    powers = 2 * np.arange(odd.size) + 1

    def fn(z):
        w = a(z)
        return c * np.exp(sum(k * w ** n for k, n in zip(odd, powers)))

    def series(order):
        w = a.to_series(order)
        g = TruncatedSeries.constant(0.0, order)
        for k, n in zip(odd, powers):
            g = g + (w ** int(n)) * complex(k)
        return series_exp(g) * c

    radius = math.inf if p == 0 else 1.0 / abs(p)
    return Family(AnalyticFunction(fn, series, radius, "c*exp(odd(alpha_p))"), phi,
                  None, {"p": p})
