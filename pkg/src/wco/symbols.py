"""Closed-form symbols: linear fractional maps, weights and parametric families.

Closed forms are kept alongside their Taylor series because the residual
machinery in :mod:`wco.operators` needs analytic information (radius of
holomorphy, maximum modulus on circles) to bound truncation tails.

Every symbol object here follows the same informal protocol:

* ``f(z)`` evaluates at a scalar or array,
* ``f.to_series(order)`` returns a :class:`~wco.series.TruncatedSeries`,
* ``f.radius`` is the radius of the largest disk about 0 where ``f`` is
  holomorphic (``inf`` for entire functions),
* ``f.max_modulus(r)`` is (an upper estimate of) ``max |f|`` on ``|z| = r``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq

from .config import DEFAULT
from .errors import ConstraintError, DomainError, NumericalFailure
from .series import TruncatedSeries, series_div

# sampled maxima are inflated by this factor to cover the gaps between samples
_SAMPLES = 512
_SAMPLE_SLACK = 1.01


_UNIT = {}


def _circle(r, samples=_SAMPLES):
    if samples not in _UNIT:
        _UNIT[samples] = np.exp(2j * np.pi * np.arange(samples) / samples)
    return r * _UNIT[samples]


def _circle_image_max(a, b, c, d, r):
    """``max |(a z + b)/(c z + d)|`` on ``|z| = r`` from the image circle."""
    ar, cr = a * r, c * r
    denom = abs(d) ** 2 - abs(cr) ** 2
    if abs(denom) <= 1e-15:
        return math.inf
    center = (b * np.conj(d) - ar * np.conj(cr)) / denom
    rad = abs(ar * d - b * cr) / abs(denom)
    return float(abs(center) + rad)


def sampled_max_modulus(f, r, samples=_SAMPLES):
    """Estimate of ``max |f|`` on ``|z| = r`` by uniform sampling."""
    with np.errstate(all="ignore"):
        vals = np.abs(f(_circle(r, samples)))
    if not np.all(np.isfinite(vals)):
        return math.inf
    return float(vals.max() * _SAMPLE_SLACK)


# ---------------------------------------------------------------------------
# linear fractional maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LinearFractionalMap:
    """The map ``z -> (a z + b) / (c z + d)`` with ``ad - bc != 0``.

    Coefficients are stored scaled so that the largest modulus is 1 and the
    first coefficient attaining it is real and positive, which makes the
    stored form canonical.
    """

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        m = np.array([self.a, self.b, self.c, self.d], dtype=complex)
        if not np.all(np.isfinite(m)):
            raise ValueError("LFT coefficients must be finite")
        scale = np.abs(m).max()
        if scale == 0:
            raise ConstraintError("degenerate-lft", "all LFT coefficients vanish")
        m = m / scale
        k = int(np.argmax(np.abs(m) >= 1.0 - 1e-9))
        m = m * (np.conj(m[k]) / abs(m[k]))
        if abs(m[0] * m[3] - m[1] * m[2]) <= DEFAULT.degenerate:
            raise ConstraintError("degenerate-lft", "ad - bc vanishes")
        for name, v in zip("abcd", m):
            object.__setattr__(self, name, complex(v))

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @property
    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]])

    @property
    def coefficients(self):
        return np.array([self.a, self.b, self.c, self.d])

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def pole(self):
        if self.c == 0:
            return None
        return -self.d / self.c

    @property
    def radius(self):
        return math.inf if self.c == 0 else abs(self.d / self.c)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = (self.a * z + self.b) / (self.c * z + self.d)
        return out[()] if out.ndim == 0 else out

    def __repr__(self):
        return (f"LinearFractionalMap(a={self.a:.6g}, b={self.b:.6g}, "
                f"c={self.c:.6g}, d={self.d:.6g})")

    def inverse(self):
        return LinearFractionalMap(self.d, -self.b, -self.c, self.a)

    def compose(self, other):
        """``self o other``."""
        return lft_compose(self, other)

    def to_series(self, order):
        return lft_to_series(self, order)

    def max_modulus(self, r):
        """Exact ``max |m|`` on ``|z| = r`` from the image circle."""
        return _circle_image_max(self.a, self.b, self.c, self.d, r)

    def equivalent(self, other, tol=1e-9):
        """True when the coefficient vectors are proportional (same map)."""
        u, v = self.coefficients, other.coefficients
        k = int(np.argmax(np.abs(u)))
        lam = v[k] / u[k]
        return bool(np.max(np.abs(v - lam * u)) <= tol)

    def is_identity(self, tol=1e-12):
        return self.equivalent(LinearFractionalMap.identity(), tol)


def lft_compose(m1, m2):
    """``m1 o m2`` via the product of coefficient matrices."""
    prod = m1.matrix @ m2.matrix
    scale = np.abs(prod).max()
    if scale == 0 or abs(np.linalg.det(prod / scale)) <= DEFAULT.degenerate:
        raise ConstraintError("degenerate-composite", "composite LFT is degenerate")
    return LinearFractionalMap.from_matrix(prod)


def lft_is_disk_selfmap(m, tol=DEFAULT.selfmap, samples=1024):
    """Decide ``sup_{|z|=1} |m(z)| <= 1 + tol``.

    The decision uses the image-circle criterion
    ``|b conj(d) - a conj(c)| + |ad - bc| <= |d|^2 - |c|^2``; a dense
    boundary sample must agree, otherwise the map is rejected.
    """
    a, b, c, d = m.a, m.b, m.c, m.d
    rhs = abs(d) ** 2 - abs(c) ** 2
    if rhs <= 0:
        return False
    lhs = abs(b * np.conj(d) - a * np.conj(c)) + abs(a * d - b * c)
    closed = lhs <= (1.0 + tol) * rhs
    with np.errstate(all="ignore"):
        sampled = np.abs(m(_circle(1.0, samples))).max()
    return bool(closed and sampled <= 1.0 + tol)


@dataclass(frozen=True)
class FixedPoint:
    value: complex
    location: str  # "interior" | "boundary" | "exterior"


def _locate(z, band):
    r = abs(z)
    if abs(r - 1.0) <= band:
        return "boundary"
    return "interior" if r < 1.0 else "exterior"


def lft_fixed_points(m, band=DEFAULT.boundary_band):
    """Finite fixed points of ``m``, roots of ``c z^2 + (d - a) z - b``.

    Raises :class:`DomainError` for the identity map.
    """
    a, b, c, d = m.a, m.b, m.c, m.d
    small = 1e-14
    if abs(c) <= small:
        if abs(d - a) <= small:
            if abs(b) <= small:
                raise DomainError("the identity map fixes every point")
            return []
        z = b / (d - a)
        return [FixedPoint(complex(z), _locate(z, band))]
    B = d - a
    disc = B * B + 4 * b * c
    if abs(disc) <= 1e-13 * (abs(B) ** 2 + abs(4 * b * c)):
        disc = 0.0
    sq = cmath.sqrt(disc)
    if (np.conj(B) * sq).real < 0:
        sq = -sq
    q = -0.5 * (B + sq)
    if q == 0:
        roots = [0j]
    elif disc == 0:
        roots = [q / c]
    else:
        roots = [q / c, -b / q]
    out = []
    for z in roots:
        # one Newton step on the quadratic sharpens simple roots
        f = c * z * z + B * z - b
        fp = 2 * c * z + B
        if disc != 0 and abs(fp) > small:
            z = z - f / fp
        out.append(FixedPoint(complex(z), _locate(z, band)))
    return out


def lft_to_series(m, order):
    """Geometric expansion ``(a z + b)/d * sum (-c/d)^n z^n``."""
    a, b, c, d = m.a, m.b, m.c, m.d
    if c != 0 and abs(d / c) < 1.0 + 1e-9:
        raise DomainError("LFT pole lies on or inside the closed unit disk")
    ratio = -c / d
    g = np.power(ratio, np.arange(order + 1), dtype=complex)
    out = (b / d) * g
    out[1:] += (a / d) * g[:-1]
    return TruncatedSeries(out)


def cross_adjoint(m):
    """The adjoint map ``(conj(a) z - conj(c)) / (-conj(b) z + conj(d))``."""
    return LinearFractionalMap(np.conj(m.a), -np.conj(m.c), -np.conj(m.b), np.conj(m.d))


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RationalFunction:
    """``num(z) / den(z)`` with ascending polynomial coefficients."""

    num: np.ndarray
    den: np.ndarray

    def __post_init__(self):
        num = np.trim_zeros(np.array(self.num, dtype=complex).ravel(), "b")
        den = np.trim_zeros(np.array(self.den, dtype=complex).ravel(), "b")
        if den.size == 0:
            raise ValueError("zero denominator")
        if num.size == 0:
            num = np.zeros(1, dtype=complex)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def constant(cls, value):
        return cls([value], [1.0])

    @classmethod
    def from_lft(cls, m):
        return cls([m.b, m.a], [m.d, m.c])

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = P.polyval(z, self.num) / P.polyval(z, self.den)
        return out[()] if out.ndim == 0 else out

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return RationalFunction(P.polymul(self.num, other.num),
                                    P.polymul(self.den, other.den))
        if isinstance(other, LinearFractionalMap):
            return self * RationalFunction.from_lft(other)
        if np.isscalar(other):
            return RationalFunction(self.num * other, self.den)
        return NotImplemented

    __rmul__ = __mul__

    @property
    def poles(self):
        if self.den.size < 2:
            return np.zeros(0, dtype=complex)
        return P.polyroots(self.den)

    @property
    def radius(self):
        poles = self.poles
        return math.inf if poles.size == 0 else float(np.abs(poles).min())

    @property
    def is_constant(self):
        return self.num.size == 1 and self.den.size == 1

    def to_series(self, order):
        if abs(self.den[0]) == 0:
            raise DomainError("rational function has a pole at the origin")
        num = TruncatedSeries.from_coeffs(self.num, order)
        den = TruncatedSeries.from_coeffs(self.den, order)
        return series_div(num, den)

    def max_modulus(self, r):
        if self.num.size <= 2 and self.den.size <= 2:
            n = np.pad(self.num, (0, 2 - self.num.size))
            d = np.pad(self.den, (0, 2 - self.den.size))
            return _circle_image_max(n[1], n[0], d[1], d[0], r)
        return sampled_max_modulus(self, r)

    def __repr__(self):
        return f"RationalFunction(num={self.num}, den={self.den})"


@dataclass(frozen=True, eq=False)
class AnalyticFunction:
    """A holomorphic function known through an evaluator and a series builder."""

    fn: Callable
    series: Callable
    radius: float = math.inf
    label: str = ""

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.asarray(self.fn(z), dtype=complex)
        if out.shape != z.shape:
            out = np.broadcast_to(out, z.shape).copy()
        return out[()] if out.ndim == 0 else out

    def to_series(self, order):
        return self.series(order)

    def max_modulus(self, r):
        return sampled_max_modulus(self, r)

    def __repr__(self):
        return f"AnalyticFunction({self.label or self.fn!r})"


# ---------------------------------------------------------------------------
# standard symbols
# ---------------------------------------------------------------------------


def _check_disk(p, what="p"):
    if not abs(p) < 1.0:
        raise DomainError(f"{what} must lie in the open unit disk, got {p!r}")


def _check_unimodular(lam, tol=DEFAULT.unimodular, what="lambda"):
    if abs(abs(lam) - 1.0) > tol:
        raise DomainError(f"{what} must be unimodular, got |{what}| = {abs(lam)!r}")


def alpha(p):
    """Disk automorphism ``(p - z) / (1 - conj(p) z)``; an involution."""
    _check_disk(p)
    return LinearFractionalMap(-1.0, p, -np.conj(p), 1.0)


def sigma(p, lam):
    """``lam (p - z) / (1 - conj(p) z)``."""
    _check_disk(p)
    _check_unimodular(lam)
    return LinearFractionalMap(-lam, lam * p, -np.conj(p), 1.0)


def normalized_kernel(p):
    """``sqrt(1 - |p|^2) / (1 - conj(p) z)``, the unit-norm kernel at ``p``."""
    _check_disk(p)
    return RationalFunction([math.sqrt(1.0 - abs(p) ** 2)], [1.0, -np.conj(p)])


def reproducing_kernel(w):
    """``K_w = 1 / (1 - conj(w) z)``."""
    _check_disk(w, "w")
    return RationalFunction([1.0], [1.0, -np.conj(w)])


def kernel_vector(w, order):
    """Coefficient vector ``conj(w)^n`` of ``K_w``."""
    return np.power(np.conj(w), np.arange(order + 1), dtype=complex)


def make_standard_symbol(kind, order=None, **params):
    """Named closed-form symbol.

    ``alpha_p`` and ``sigma`` return maps; ``k_p`` and ``kernel`` return
    series at ``order`` (or the closed form when ``order`` is None).
    """
    if kind == "alpha_p":
        return alpha(params["p"])
    if kind == "sigma":
        return sigma(params["p"], params.get("lam", 1.0))
    if kind == "k_p":
        f = normalized_kernel(params["p"])
    elif kind == "kernel":
        f = reproducing_kernel(params["w"])
    else:
        raise ValueError(f"unknown standard symbol {kind!r}")
    return f if order is None else f.to_series(order)


def solve_conjugation_lambda(p):
    """The rotation making ``J W_{k_p, sigma}`` a conjugation: ``conj(p)/p``.

    For ``p = 0`` any unimodular value works and 1 is returned.
    """
    _check_disk(p)
    if p == 0:
        return 1.0 + 0j
    # via the phase, so tiny |p| cannot overflow
    return cmath.exp(-2j * cmath.phase(p))


# ---------------------------------------------------------------------------
# conjugations and families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConjugationSpec:
    """Base point ``p`` and rotation ``lam`` of the conjugation ``J W_{k_p, sigma}``.

    Construction validates ``lam p = conj(p)``; use :meth:`unchecked` to
    build a deliberately invalid spec for negative controls.
    """

    p: complex
    lam: complex
    checked: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "p", complex(self.p))
        object.__setattr__(self, "lam", complex(self.lam))
        _check_disk(self.p)
        if self.checked:
            if abs(abs(self.lam) - 1.0) > DEFAULT.unimodular:
                raise ConstraintError("lambda-unimodular", "|lambda| must equal 1")
            if abs(self.lam * self.p - np.conj(self.p)) > DEFAULT.unimodular:
                raise ConstraintError("lambda-p-equals-conj-p",
                                      "the conjugation requires lambda*p = conj(p)")

    @classmethod
    def unchecked(cls, p, lam):
        return cls(p, lam, checked=False)

    @classmethod
    def at(cls, p):
        return cls(p, solve_conjugation_lambda(p))

    def sigma(self):
        return LinearFractionalMap(-self.lam, self.lam * self.p, -np.conj(self.p), 1.0)

    def kernel(self):
        return normalized_kernel(self.p)


@dataclass(frozen=True)
class CsFamilyParams:
    p: complex
    lam: complex
    a0: complex
    a1: complex
    c: complex


@dataclass(frozen=True)
class Family:
    """Weight, composition symbol and companion conjugation of one operator."""

    psi: object
    phi: LinearFractionalMap
    conjugation: ConjugationSpec | None = None
    info: dict = field(default_factory=dict)


def _require_selfmap(phi):
    if not lft_is_disk_selfmap(phi):
        raise ConstraintError("phi-disk-selfmap", f"{phi!r} is not a self-map of the disk")


def _require_weight_pole_outside(psi, what="psi"):
    if psi.radius < 1.0 + 1e-9:
        raise ConstraintError(f"{what}-pole-outside-closed-disk",
                              f"{what} has a pole at modulus {psi.radius:.6g}")


def cs_family_symbols(p, lam, a0, a1, c):
    """Weight and map of the complex symmetric family, without validation."""
    lb = np.conj(lam)
    d0 = 1.0 - a0 * p
    d1 = p - lb * a0
    psi = RationalFunction([c], [d0, -d1])
    # a0 + a1 (p - lb z) / (d0 - d1 z) over a common denominator
    phi = LinearFractionalMap(-a0 * d1 - a1 * lb, a0 * d0 + a1 * p, -d1, d0)
    return psi, phi


def make_cs_family(params):
    """Symbols complex symmetric under ``J W_{k_p, sigma}``.

    ``psi = c / (1 - a0 p - (p - conj(lam) a0) z)`` and
    ``phi = a0 + a1 (p - conj(lam) z) / (1 - a0 p - (p - conj(lam) a0) z)``.
    """
    p, lam, a0, a1, c = (complex(v) for v in
                         (params.p, params.lam, params.a0, params.a1, params.c))
    conj_spec = ConjugationSpec(p, lam)
    if c == 0:
        raise ConstraintError("c-nonzero", "the weight constant must be nonzero")
    if a1 == 0:
        raise ConstraintError("a1-nonzero", "a1 = 0 gives a constant map, not an LFT")
    psi, phi = cs_family_symbols(p, lam, a0, a1, c)
    _require_weight_pole_outside(psi)
    _require_selfmap(phi)
    return Family(psi, phi, conj_spec,
                  {"decay_ratio": 1.0 / psi.radius if psi.radius < math.inf else 0.0})


def make_unitary_family(q, mu1, mu2):
    """Unitary operator with ``phi = mu1 alpha_q`` and ``psi = mu2 k_q``.

    The companion conjugation has base point ``conj(q)``.
    """
    _check_disk(q, "q")
    _check_unimodular(mu1, what="mu1")
    _check_unimodular(mu2, what="mu2")
    phi = LinearFractionalMap(-mu1, mu1 * q, -np.conj(q), 1.0)
    psi = RationalFunction([mu2 * math.sqrt(1.0 - abs(q) ** 2)], [1.0, -np.conj(q)])
    spec = ConjugationSpec.at(np.conj(q))
    return Family(psi, phi, spec, {"cs_params": CsFamilyParams(
        spec.p, spec.lam, 0.0, spec.lam * mu1, mu2 * math.sqrt(1.0 - abs(q) ** 2))})


def _real(x, name):
    x = complex(x)
    if abs(x.imag) > 1e-12:
        raise ConstraintError("b1-b2-real", f"{name} must be real")
    return x.real


def make_hermitian_family(b0, b1, b2):
    """Hermitian operator ``psi = b2/(1 - conj(b0) z)``, ``phi = b0 + b1 z/(1 - conj(b0) z)``.

    The conjugation is ``J C_{-lam z}`` with ``lam conj(b0) + b0 = 0``
    (``lam = 1`` when ``b0 = 0``), stored as the base-point-zero spec with
    rotation ``lam``.
    """
    _check_disk(b0, "b0")
    b1 = _real(b1, "b1")
    b2 = _real(b2, "b2")
    b0 = complex(b0)
    if b1 == 0:
        raise ConstraintError("b1-nonzero", "b1 = 0 gives a constant map, not an LFT")
    phi = LinearFractionalMap(b1 - abs(b0) ** 2, b0, -np.conj(b0), 1.0)
    _require_selfmap(phi)
    psi = RationalFunction([b2], [1.0, -np.conj(b0)])
    lam = 1.0 + 0j if b0 == 0 else complex(-b0 / np.conj(b0))
    spec = ConjugationSpec(0.0, lam)
    return Family(psi, phi, spec, {"lambda": lam, "rotation": -lam})


def make_normal_interior_family(p, gamma, delta):
    """Normal operator with interior fixed point ``p``.

    ``phi = alpha_p o (delta alpha_p)`` and ``psi = gamma K_p / (K_p o phi)``;
    the conjugation has base point ``q = (p - conj(p)) / (p^2 - 1)``.
    """
    _check_disk(p)
    if abs(delta) > 1.0:
        raise ConstraintError("delta-in-closed-disk", "|delta| must not exceed 1")
    if delta == 0:
        raise ConstraintError("delta-nonzero", "delta = 0 gives a constant map")
    if gamma == 0:
        raise ConstraintError("gamma-nonzero", "gamma must be nonzero")
    p = complex(p)
    scaled = LinearFractionalMap(-delta, delta * p, -np.conj(p), 1.0)
    phi = lft_compose(alpha(p), scaled)
    A, B, C, D = phi.a, phi.b, phi.c, phi.d
    pb = np.conj(p)
    # gamma (1 - conj(p) phi) / (1 - conj(p) z); the numerator vanishes at 1/conj(p)
    kappa = D - pb * B
    if p != 0:
        resid = abs((C - pb * A) + pb * kappa)
        if resid > 1e-10 * max(1.0, abs(kappa)):
            raise NumericalFailure("expected cancellation of 1 - conj(p) z failed")
    psi = RationalFunction([gamma * kappa], [D, C])
    _require_weight_pole_outside(psi)
    q = (p - pb) / (p * p - 1.0)
    if not abs(q) < 1.0:
        raise ConstraintError("q-in-disk", f"conjugation base point |q| = {abs(q)} >= 1")
    spec = ConjugationSpec.at(q)
    return Family(psi, phi, spec, {"q": q, "fixed_point": p})


def solve_boundary_basepoint(b1, r, grid=720, tol=DEFAULT.basepoint):
    """All ``p = r e^{i theta}`` with ``b1 p (conj(p) - 1) + conj(p) (1 - p) = 0``.

    Equivalently ``b1 = (r - e^{-i theta}) / (r - e^{i theta})``; the phase
    mismatch is bracketed on a grid over ``[0, 2 pi)`` and refined with
    Brent's method.  Generically there are two solutions.
    """
    if abs(abs(b1) - 1.0) > tol:
        raise DomainError("b1 must be unimodular")
    if not 0.0 < r < 1.0:
        raise DomainError("r must lie in (0, 1)")
    b1c = np.conj(b1)

    def mismatch(theta):
        return float(np.angle(b1c * (r - np.exp(-1j * theta)) / (r - np.exp(1j * theta))))

    thetas = np.linspace(0.0, 2.0 * np.pi, grid, endpoint=False)
    vals = np.array([mismatch(t) for t in thetas])
    roots = [float(t) for t, v in zip(thetas, vals) if v == 0.0]
    for i in range(grid):
        j = (i + 1) % grid
        v0, v1 = vals[i], vals[j]
        if v0 * v1 < 0 and abs(v0 - v1) < np.pi:
            hi = thetas[j] if j else 2.0 * np.pi
            if mismatch(thetas[i]) * mismatch(hi) < 0:
                roots.append(brentq(mismatch, thetas[i], hi, xtol=1e-15, rtol=1e-15))
            else:
                roots.append(thetas[i] if abs(v0) <= abs(v1) else hi)
    roots = sorted(t % (2.0 * np.pi) for t in roots)
    unique = []
    for t in roots:
        if not unique or abs(t - unique[-1]) > 1e-9:
            unique.append(t)
    if len(unique) > 1 and abs(unique[0] + 2.0 * np.pi - unique[-1]) <= 1e-9:
        unique.pop()
    out = []
    for t in unique:
        p = r * cmath.exp(1j * t)
        if abs(b1 * p * (np.conj(p) - 1.0) + np.conj(p) * (1.0 - p)) <= tol:
            out.append(p)
    if not out:
        raise NumericalFailure("no base point found within tolerance")
    return out


def make_boundary_normal_family(a, b, c, d, r=0.5):
    """Normal operator ``W_{K_{phi*(0)}, phi}`` for a map with a boundary fixed point.

    Requires ``|b| = |c|``.  The conjugation base point is ``p conj(eta)``
    where ``p`` (of modulus ``r``) solves the base-point equation for the
    rotated map ``conj(eta) phi(eta z)``.
    """
    phi = LinearFractionalMap(a, b, c, d)
    a, b, c, d = phi.a, phi.b, phi.c, phi.d
    if abs(d) == 0:
        raise ConstraintError("d-nonzero", "d must be nonzero")
    _require_selfmap(phi)
    if abs(b) <= 1e-14 and abs(c) <= 1e-14:
        raise ConstraintError("b-c-nonzero", "b = c = 0 is the degenerate rotation case")
    try:
        fixed = lft_fixed_points(phi)
    except DomainError:
        raise ConstraintError("boundary-fixed-point", "identity map excluded") from None
    boundary = sorted((fp.value for fp in fixed if fp.location == "boundary"),
                      key=lambda z: cmath.phase(z) % (2 * np.pi))
    if not boundary:
        raise ConstraintError("boundary-fixed-point", "phi has no boundary fixed point")
    if abs(abs(b) - abs(c)) > DEFAULT.normal_bc:
        raise ConstraintError("lemma-bc-|b|=|c|",
                              f"|b| = {abs(b):.6g} differs from |c| = {abs(c):.6g}")
    eta = boundary[0] / abs(boundary[0])
    w = -np.conj(c) / np.conj(d)          # phi*(0)
    psi = RationalFunction([1.0], [1.0, -np.conj(w)])
    b1 = b * np.conj(eta) ** 2 / c
    b1 = b1 / abs(b1)
    solutions = solve_boundary_basepoint(b1, r)
    base = solutions[0] * np.conj(eta)
    spec = ConjugationSpec.at(base)
    return Family(psi, phi, spec, {"eta": eta, "b1": b1, "p": solutions[0],
                                   "solutions": solutions, "phi_star_0": w})
