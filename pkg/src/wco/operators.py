"""Finite sections of weighted composition operators and certified residuals.

The matrix of ``W_{psi,phi} f = psi * (f o phi)`` in the monomial basis has
column ``j`` equal to the coefficients of ``psi * phi**j``.  A finite
section of order ``N`` keeps rows and columns ``0..N``.  Products of
finite sections differ from finite sections of products by the mass that
columns (and, when ``phi(0) != 0``, rows) carry beyond index ``N``.  Columns
with ``j`` close to ``N`` spill heavily, so identities are checked on a
leading block ``0..K`` chosen so that the analytic bound on that spill is
small.  Each :class:`ResidualReport` records the block, the bound and the
resulting pass threshold ``max(tol, 10 * tail_bound)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .config import DEFAULT
from .errors import DomainError, OrderMismatchError
from .series import TruncatedSeries, series_inner
from .symbols import (ConjugationSpec, LinearFractionalMap, RationalFunction,
                      kernel_vector)


def _has_closed_form(f):
    return f is not None and not isinstance(f, TruncatedSeries) and hasattr(f, "max_modulus")


def as_series(f, order):
    """Series of ``f`` at ``order``; series inputs must already match it."""
    if isinstance(f, TruncatedSeries):
        if order is not None and f.order != order:
            raise OrderMismatchError(f"series has order {f.order}, expected {order}")
        return f
    return f.to_series(order)


# ---------------------------------------------------------------------------
# tail bounds
# ---------------------------------------------------------------------------


def _outer_radii(radius, count=48):
    upper = 64.0 if not math.isfinite(radius) or radius > 65.0 else 1.0 + 0.999 * (radius - 1.0)
    if upper <= 1.0:
        return np.zeros(0)
    gap = upper - 1.0
    return 1.0 + np.geomspace(min(1e-3, gap / 2), gap, count)


def _log(x):
    with np.errstate(divide="ignore"):
        return np.log(np.asarray(x, dtype=float))


def column_tail_bounds(weight, selfmap, order):
    """Bounds on ``sum_{n>N} |(psi phi^j)_n|`` for ``j = 0..N``.

    Cauchy estimate on ``|z| = r > 1``, minimized over ``r``.
    """
    rs = _outer_radii(min(weight.radius, selfmap.radius))
    if rs.size == 0:
        return np.full(order + 1, np.inf)
    m_psi = np.array([weight.max_modulus(r) for r in rs])
    m_phi = np.array([selfmap.max_modulus(r) for r in rs])
    j = np.arange(order + 1)
    with np.errstate(invalid="ignore"):
        # phi^0 = 1 even when phi vanishes identically
        powers = np.where(j[None, :] == 0, 0.0, j[None, :] * _log(m_phi)[:, None])
        logb = (_log(m_psi)[:, None] + powers
                - (order + 1) * np.log(rs)[:, None] - np.log(1.0 - 1.0 / rs)[:, None])
    logb = np.nan_to_num(logb, nan=np.inf)
    return np.exp(np.min(logb, axis=0))


def row_tail_bounds(weight, selfmap, order):
    """Bounds on ``sum_{j>N} |(psi phi^j)_i|`` for ``i = 0..N``.

    Zero when ``phi(0) = 0`` since the matrix is then lower triangular.
    """
    if selfmap(0.0) == 0:
        return np.zeros(order + 1)
    ss = np.linspace(0.02, 0.98, 49)
    m_psi = np.array([weight.max_modulus(s) for s in ss])
    m_phi = np.array([selfmap.max_modulus(s) for s in ss])
    ok = m_phi < 1.0
    if not np.any(ok):
        return np.full(order + 1, np.inf)
    ss, m_psi, m_phi = ss[ok], m_psi[ok], m_phi[ok]
    i = np.arange(order + 1)
    logb = (_log(m_psi)[:, None] - i[None, :] * np.log(ss)[:, None]
            + (order + 1) * np.log(m_phi)[:, None] - np.log(1.0 - m_phi)[:, None])
    logb = np.nan_to_num(logb, nan=np.inf)
    return np.exp(np.min(logb, axis=0))


def cauchy_tail(f, order):
    """Bound on ``sum_{n>N} |f_n|`` for a closed-form symbol."""
    rs = _outer_radii(f.radius)
    if rs.size == 0:
        return math.inf
    m = np.array([f.max_modulus(r) for r in rs])
    with np.errstate(divide="ignore", invalid="ignore"):
        b = m * rs ** -(order + 1.0) / (1.0 - 1.0 / rs)
    return float(np.nanmin(b))


def _empirical_tails(entries, phi0):
    n = entries.shape[0]
    w = max(2, n // 8)
    cols = np.linalg.norm(entries[n - w:, :], axis=0)
    rows = np.zeros(n) if phi0 == 0 else np.linalg.norm(entries[:, n - w:], axis=1)
    return cols, rows


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Order-``N`` finite section of ``W_{psi,phi}`` with its tail data."""

    entries: np.ndarray
    psi: TruncatedSeries
    phi: TruncatedSeries
    weight: object = None
    selfmap: object = None
    unitary: bool = False

    @property
    def order(self):
        return self.entries.shape[0] - 1

    @property
    def H(self):
        return self.entries.conj().T

    @property
    def closed_form(self):
        return _has_closed_form(self.weight) and _has_closed_form(self.selfmap)

    @cached_property
    def _tails(self):
        if self.closed_form:
            cols = column_tail_bounds(self.weight, self.selfmap, self.order)
            rows = row_tail_bounds(self.weight, self.selfmap, self.order)
        else:
            cols, rows = _empirical_tails(self.entries, self.phi.coeffs[0])
        if self.unitary:
            cols, rows = np.minimum(cols, 1.0), np.minimum(rows, 1.0)
        return cols, rows

    @property
    def column_tails(self):
        return self._tails[0]

    @property
    def row_tails(self):
        return self._tails[1]


def build_wco_matrix(psi, phi, order=None, unitary=False):
    """Finite section of ``W_{psi,phi}``; column ``j`` holds ``psi * phi**j``.

    ``psi`` and ``phi`` may be closed-form symbols or series.  With closed
    forms the tail bounds are analytic, otherwise they are estimated from
    the last rows and columns.
    """
    if order is None:
        orders = [f.order for f in (psi, phi) if isinstance(f, TruncatedSeries)]
        if not orders:
            raise ValueError("order is required when both symbols are closed forms")
        order = orders[0]
    psi_s, phi_s = as_series(psi, order), as_series(phi, order)
    n = order + 1
    m = np.empty((n, n), dtype=complex)
    col = psi_s.coeffs.copy()
    for j in range(n):
        m[:, j] = col
        col = np.convolve(col, phi_s.coeffs)[:n]
    m.setflags(write=False)
    return OperatorMatrix(m, psi_s, phi_s,
                          psi if _has_closed_form(psi) else None,
                          phi if _has_closed_form(phi) else None,
                          unitary)


@dataclass(frozen=True, eq=False)
class AntilinearOperator:
    """``f -> conj(U f)`` in coefficients, for the conjugation ``J W_{k_p, sigma}``."""

    u: OperatorMatrix
    spec: ConjugationSpec

    @property
    def order(self):
        return self.u.order

    def __call__(self, v):
        return apply_conjugation(self, v)


@lru_cache(maxsize=256)
def conjugation_operator(spec, order):
    """Finite section of ``J W_{k_p, sigma}`` for a conjugation spec.

    The linear part is unitary, so its row and column tails never exceed 1.
    Results are cached per ``(spec, order)``; treat them as read-only.
    """
    u = build_wco_matrix(spec.kernel(), spec.sigma(), order, unitary=True)
    return AntilinearOperator(u, spec)


def apply_conjugation(c_op, v):
    v = np.asarray(v.coeffs if isinstance(v, TruncatedSeries) else v, dtype=complex)
    if v.shape != (c_op.order + 1,):
        raise OrderMismatchError(f"vector of length {v.size} for order {c_op.order}")
    return np.conj(c_op.u.entries @ v)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of one numerical check.

    ``tolerance`` is ``max(requested tol, 10 * tail_bound)``; a check with
    an infinite tail bound never passes.
    """

    name: str
    value: float
    order: int
    tail_bound: float
    tolerance: float
    passed: bool
    block: int | None = None
    frobenius: float | None = None
    detail: dict = field(default_factory=dict)

    @property
    def verdict(self):
        return "pass" if self.passed else "fail"

    def to_dict(self):
        def num(x):
            if x is None:
                return None
            x = float(x)
            return x if math.isfinite(x) else repr(x)

        out = {"name": self.name, "verdict": self.verdict, "value": num(self.value),
               "tolerance": num(self.tolerance), "tail_bound": num(self.tail_bound),
               "order": self.order, "block": self.block, "frobenius": num(self.frobenius)}
        if self.detail:
            out["detail"] = {k: _jsonable(v) for k, v in sorted(self.detail.items())}
        return out


def _jsonable(v):
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def make_report(name, value, order, tail, tol, block=None, frobenius=None,
                upper=False, **detail):
    """Build a report; ``upper`` flips the test to ``value >= tol`` for negative controls."""
    value = float(value)
    tail = float(tail)
    if upper:
        tolerance = tol
        passed = math.isfinite(value) and value >= tol
    else:
        tolerance = max(tol, 10.0 * tail)
        passed = math.isfinite(tolerance) and value <= tolerance
    return ResidualReport(name, value, order, tail, float(tolerance), bool(passed),
                          block, frobenius, detail)


def operator_norm(m, iterations=DEFAULT.power_iterations, seed=0):
    """Spectral norm by power iteration on ``m^H m``."""
    m = np.asarray(m, dtype=complex)
    if m.size == 0 or not np.any(m):
        return 0.0
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(m.shape[1]) + 1j * rng.standard_normal(m.shape[1])
    x /= np.linalg.norm(x)
    for _ in range(iterations):
        y = m.conj().T @ (m @ x)
        nrm = np.linalg.norm(y)
        if nrm == 0:
            return 0.0
        x = y / nrm
    return float(np.linalg.norm(m @ x))


def _cumulative_bound(terms, n):
    total = np.zeros(n)
    for x, y in terms:
        with np.errstate(invalid="ignore"):
            part = np.sqrt(np.cumsum(np.asarray(x)[:n] ** 2)) * np.sqrt(np.cumsum(np.asarray(y)[:n] ** 2))
        total = total + np.nan_to_num(part, nan=np.inf)
    return total


def choose_block(terms, order, target):
    """Largest ``K`` whose Frobenius tail bound over rows/cols ``0..K`` is ``<= target``.

    ``terms`` lists pairs ``(x, y)`` meaning an entry error ``<= x_i y_j``.
    Returns ``(K, bound)``; ``K`` is 0 when even the first entry fails.
    """
    cum = _cumulative_bound(terms, order + 1)
    ok = np.nonzero(cum <= target)[0]
    k = int(ok.max()) if ok.size else 0
    return k, float(cum[k])


def _block_report(name, defect, terms, order, tol, block, config, **detail):
    if block is None:
        block, tail = choose_block(terms, order, config.tail_fraction * tol)
    else:
        block = min(int(block), order)
        tail = float(_cumulative_bound(terms, block + 1)[block])
    sub = defect[: block + 1, : block + 1]
    value = operator_norm(sub, config.power_iterations)
    return make_report(name, value, order, tail, tol, block=block,
                       frobenius=float(np.linalg.norm(sub)), **detail)


def _check_same_order(*ops):
    orders = {op.order for op in ops}
    if len(orders) != 1:
        raise OrderMismatchError(f"operators have different orders: {sorted(orders)}")


def involution_residual(c_op, tol=DEFAULT.residual, block=None, config=DEFAULT):
    """``||C^2 - I||`` on a certified block; ``C^2`` has matrix ``conj(U) U``."""
    u = c_op.u
    defect = np.conj(u.entries) @ u.entries - np.eye(u.order + 1)
    return _block_report("involution", defect, [(u.row_tails, u.column_tails)],
                         u.order, tol, block, config)


def isometry_deviation(c_op, v):
    """``| ||Cv|| - ||v|| |`` for a coefficient vector ``v``."""
    v = np.asarray(v, dtype=complex)
    return abs(np.linalg.norm(apply_conjugation(c_op, v)) - np.linalg.norm(v))


def certified_block(m, target):
    """Largest ``K`` such that columns ``0..K`` of ``m`` lose at most ``target`` beyond the section."""
    cum = np.sqrt(np.cumsum(m.column_tails ** 2))
    ok = np.nonzero(cum <= target)[0]
    return int(ok.max()) if ok.size else -1


def cs_residual(t, c_op, tol=DEFAULT.residual, block=None, config=DEFAULT):
    """``||C T - T^* C||``; in matrices ``conj(U T) - T^H conj(U)``."""
    _check_same_order(t, c_op)
    u = c_op.u
    defect = np.conj(u.entries @ t.entries) - t.H @ np.conj(u.entries)
    terms = [(u.row_tails, t.column_tails), (t.column_tails, u.column_tails)]
    return _block_report("cs", defect, terms, t.order, tol, block, config,
                         p=c_op.spec.p, lam=c_op.spec.lam)


def normal_residual(t, tol=DEFAULT.residual, block=None, config=DEFAULT):
    defect = t.H @ t.entries - t.entries @ t.H
    terms = [(t.column_tails, t.column_tails), (t.row_tails, t.row_tails)]
    return _block_report("normal", defect, terms, t.order, tol, block, config)


def hermitian_residual(t, tol=DEFAULT.residual, block=None, config=DEFAULT):
    # entries of a finite section are exact, so there is no tail
    defect = t.entries - t.H
    zero = np.zeros(t.order + 1)
    return _block_report("hermitian", defect, [(zero, zero)], t.order, tol,
                         t.order if block is None else block, config)


def unitary_residual(t, tol=DEFAULT.residual, block=None, config=DEFAULT):
    defect = t.H @ t.entries - np.eye(t.order + 1)
    return _block_report("unitary", defect, [(t.column_tails, t.column_tails)],
                         t.order, tol, block, config)


def structure_residuals(t, tol=DEFAULT.residual, config=DEFAULT):
    """Normal, Hermitian and unitary residuals of one finite section."""
    return {"normal": normal_residual(t, tol, config=config),
            "hermitian": hermitian_residual(t, tol, config=config),
            "unitary": unitary_residual(t, tol, config=config)}


def annihilation_residual(t, b, c, degree=2, tol=DEFAULT.residual, block=None, config=DEFAULT):
    """``||T^2 - B T - C I||`` (degree 2) or ``||T - B I||`` (degree 1)."""
    n = t.order + 1
    if degree == 1:
        defect = t.entries - b * np.eye(n)
        zero = np.zeros(n)
        return _block_report("annihilation", defect, [(zero, zero)], t.order, tol,
                             t.order if block is None else block, config, degree=1)
    defect = t.entries @ t.entries - b * t.entries - c * np.eye(n)
    return _block_report("annihilation", defect, [(t.row_tails, t.column_tails)],
                         t.order, tol, block, config, degree=2)


def _evaluate(f, z):
    return complex(f(z))


def kernel_adjoint_check(psi, phi, w, order, tol=1e-9, config=DEFAULT):
    """Relative deviation of ``T^H K_w`` from ``conj(psi(w)) K_{phi(w)}``.

    Raises :class:`DomainError` when the truncation bound at ``|w|``
    already exceeds ``tol``.
    """
    if not abs(w) < 1.0:
        raise DomainError("w must lie in the open unit disk")
    t = psi if isinstance(psi, OperatorMatrix) else build_wco_matrix(psi, phi, order)
    psi, phi = (t.weight or t.psi), (t.selfmap or t.phi)
    n = t.order
    kw = kernel_vector(w, n)
    lhs = t.H @ kw
    rhs = np.conj(_evaluate(psi, w)) * kernel_vector(_evaluate(phi, w), n)
    scale = np.linalg.norm(kw)
    value = np.linalg.norm(lhs - rhs) / scale
    sup_psi = psi.max_modulus(1.0) if _has_closed_form(psi) else float(np.abs(t.psi.coeffs).sum())
    tail = sup_psi * abs(w) ** (n + 1) / (1.0 - abs(w)) * math.sqrt(n + 1) / scale
    if tail > tol:
        raise DomainError(f"truncation bound {tail:.3g} at |w| = {abs(w):.3g} exceeds tol")
    return make_report("kernel-adjoint", value, n, tail, tol, w=complex(w))


def composed_kernel(b, phi):
    """``K_b o phi`` as a rational function for an LFT ``phi``."""
    bc = np.conj(b)
    return RationalFunction([phi.d, phi.c], [phi.d - bc * phi.b, phi.c - bc * phi.a])


def bilinear_cs_check(psi, phi, spec, a, b, order, tol=1e-8, max_point=0.6):
    """Compare ``<C W K_a, K_b>`` with ``<C K_a, W K_b>`` independently.

    The left side is evaluated in closed form from the reproducing
    property; the right side is an inner product of truncated series.
    """
    for name, x in (("a", a), ("b", b)):
        if abs(x) > max_point + 1e-12:
            raise DomainError(f"|{name}| must not exceed {max_point}")
    if not isinstance(phi, LinearFractionalMap):
        raise TypeError("the bilinear check needs an LFT composition symbol")
    sig, kp = spec.sigma(), spec.kernel()
    bc = np.conj(b)
    x = complex(sig(bc))
    y = complex(phi(x))
    if abs(x) >= 1.0 or abs(y) >= 1.0:
        raise DomainError("evaluation point left the disk")
    left = np.conj(kp(bc) * psi(x) / (1.0 - np.conj(a) * y))

    c_op = conjugation_operator(spec, order)
    ka = kernel_vector(a, order)
    cka = apply_conjugation(c_op, ka)
    kb_phi = composed_kernel(b, phi)
    tkb = as_series(psi, order) * kb_phi.to_series(order)
    right = series_inner(TruncatedSeries(cka), tkb)

    ra = abs(a)
    geo = ra ** (order + 1) / math.sqrt(1.0 - ra * ra)
    tau_ck = geo + float(np.sum(ra ** np.arange(order + 1) * c_op.u.column_tails)) + geo
    prod_mod = _ProductModulus(psi, kb_phi)
    tau_tk = cauchy_tail(prod_mod, order)
    tail = np.linalg.norm(cka) * tau_tk + tkb.norm * tau_ck + tau_ck * tau_tk
    return make_report("bilinear", abs(left - right), order, tail, tol,
                       a=complex(a), b=complex(b), closed=complex(left), series=complex(right))


class _ProductModulus:
    """Modulus bound for a product of two closed forms."""

    def __init__(self, f, g):
        self.f, self.g = f, g
        self.radius = min(f.radius, g.radius)

    def max_modulus(self, r):
        return self.f.max_modulus(r) * self.g.max_modulus(r)
