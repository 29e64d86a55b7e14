"""Truncated Taylor series over the complex numbers.

A :class:`TruncatedSeries` holds the coefficients ``f_0 .. f_N`` of a
function holomorphic on the unit disk.  Every operation keeps the order
``N`` fixed, and coefficient ``n`` of a product, exponential or logarithm
depends only on input coefficients ``0 .. n``, so those results are exact
for the represented functions up to the working order.

Composition is the one place where this ladder breaks: when the inner
series does not vanish at the origin the discarded input tail leaks into
low coefficients.  :func:`compose_tail_bound` estimates that leak.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from numbers import Number

import numpy as np

from .config import DEFAULT
from .errors import DomainError, OrderMismatchError


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Coefficients of ``sum_{n<=N} coeffs[n] z**n``."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.coeffs, dtype=complex).ravel()
        if arr.size == 0:
            raise ValueError("a truncated series needs at least one coefficient")
        if not np.all(np.isfinite(arr)):
            raise ValueError("series coefficients must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    # -- constructors -------------------------------------------------
    @classmethod
    def from_coeffs(cls, values, order=None):
        """Build a series, zero-padding or truncating ``values`` to ``order``."""
        values = np.asarray(values, dtype=complex).ravel()
        if order is None:
            return cls(values)
        out = np.zeros(order + 1, dtype=complex)
        m = min(order + 1, values.size)
        out[:m] = values[:m]
        return cls(out)

    @classmethod
    def constant(cls, value, order):
        return cls.from_coeffs([value], order)

    @classmethod
    def monomial(cls, n, order, scale=1.0):
        out = np.zeros(order + 1, dtype=complex)
        if n <= order:
            out[n] = scale
        return cls(out)

    @classmethod
    def identity(cls, order):
        """The series of ``z``."""
        return cls.monomial(1, order)

    # -- basic properties ---------------------------------------------
    @property
    def order(self):
        return self.coeffs.size - 1

    @property
    def norm(self):
        """Hardy-space norm of the truncated function."""
        return float(np.linalg.norm(self.coeffs))

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, n):
        return self.coeffs[n]

    def __repr__(self):
        head = np.array2string(self.coeffs[:6], precision=4)
        more = " ..." if self.coeffs.size > 6 else ""
        return f"TruncatedSeries(order={self.order}, {head}{more})"

    def __call__(self, z):
        return series_evaluate(self, z)

    def is_close(self, other, tol=DEFAULT.coefficient):
        _check_orders(self, other)
        return bool(np.max(np.abs(self.coeffs - other.coeffs)) <= tol)

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            _check_orders(self, other)
            return other
        if isinstance(other, Number):
            return TruncatedSeries.constant(other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TruncatedSeries(self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return TruncatedSeries(self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, Number):
            return TruncatedSeries(self.coeffs * other)
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return TruncatedSeries(self.coeffs / other)
        if isinstance(other, TruncatedSeries):
            return series_div(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, Number):
            return series_div(TruncatedSeries.constant(other, self.order), self)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        out = TruncatedSeries.constant(1.0, self.order)
        base = self
        while n:
            if n & 1:
                out = series_mul(out, base)
            n >>= 1
            if n:
                base = series_mul(base, base)
        return out


def _check_orders(f, g):
    if f.order != g.order:
        raise OrderMismatchError(f"series orders differ: {f.order} != {g.order}")


def series_mul(f, g):
    """Cauchy product truncated to the common order."""
    _check_orders(f, g)
    return TruncatedSeries(np.convolve(f.coeffs, g.coeffs)[: f.order + 1])


def series_reciprocal(f):
    """Series of ``1/f``; requires ``f(0) != 0``."""
    a = f.coeffs
    if abs(a[0]) <= DEFAULT.log_zero:
        raise DomainError("reciprocal of a series with vanishing constant term")
    n_max = f.order
    out = np.zeros(n_max + 1, dtype=complex)
    out[0] = 1.0 / a[0]
    for n in range(1, n_max + 1):
        out[n] = -np.dot(a[1 : n + 1], out[n - 1 :: -1][:n]) / a[0]
    return TruncatedSeries(out)


def series_div(f, g):
    _check_orders(f, g)
    return series_mul(f, series_reciprocal(g))


def series_compose(f, phi):
    """Truncation of ``f o phi`` computed as ``sum_n f_n phi**n``.

    The powers of ``phi`` are accumulated by Horner's scheme, which performs
    the same sequence of truncated products as building each power in turn.
    When ``phi(0) != 0`` the result misses the contribution of the unknown
    tail of ``f``; see :func:`compose_tail_bound`.
    """
    _check_orders(f, phi)
    acc = TruncatedSeries.constant(f.coeffs[-1], f.order)
    for fn in f.coeffs[-2::-1]:
        acc = series_mul(acc, phi) + fn
    return acc


def compose_tail_bound(f, phi_sup, window=8):
    """Estimate of the error of :func:`series_compose` for ``f`` at ``phi``.

    ``phi_sup`` is ``sup |phi|`` on the disk.  The unknown coefficients of
    ``f`` beyond its order are extrapolated geometrically from the last
    ``window`` stored ones.  Returns 0 when ``phi`` fixes the origin, which
    the caller signals with ``phi_sup`` set to 0.
    """
    if phi_sup == 0:
        return 0.0
    mags = np.abs(f.coeffs[-window:])
    last = mags[-1]
    if last == 0.0:
        return 0.0
    first = max(mags[0], np.finfo(float).tiny)
    ratio = min((last / first) ** (1.0 / max(window - 1, 1)), 1.0)
    x = ratio * phi_sup
    if x >= 1.0:
        return float("inf")
    return float(last * x / (1.0 - x))


def series_evaluate(f, z):
    """Horner evaluation of the truncated polynomial at ``z`` (scalar or array)."""
    z_arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(z_arr) > 1.0 + 1e-15):
        raise DomainError("series evaluation is restricted to the closed unit disk")
    acc = np.zeros_like(z_arr)
    for c in f.coeffs[::-1]:
        acc = acc * z_arr + c
    return acc[()] if acc.ndim == 0 else acc


def series_inner(f, g):
    """Hardy inner product ``sum f_n conj(g_n)``."""
    _check_orders(f, g)
    return complex(np.dot(f.coeffs, np.conj(g.coeffs)))


def series_exp(f):
    """Truncated ``exp(f)`` from ``g' = f' g``."""
    a = f.coeffs
    n_max = f.order
    g = np.zeros(n_max + 1, dtype=complex)
    g[0] = cmath.exp(a[0])
    ka = np.arange(n_max + 1) * a
    for n in range(1, n_max + 1):
        g[n] = np.dot(ka[1 : n + 1], g[n - 1 :: -1][:n]) / n
    return TruncatedSeries(g)


def series_log(f, tol=DEFAULT.log_zero):
    """Principal-branch logarithm, the inverse of :func:`series_exp`.

    Raises :class:`DomainError` when the constant term vanishes.
    """
    a = f.coeffs
    if abs(a[0]) <= tol:
        raise DomainError("logarithm of a series with vanishing constant term")
    n_max = f.order
    g = np.zeros(n_max + 1, dtype=complex)
    g[0] = cmath.log(a[0])
    kg = np.zeros(n_max + 1, dtype=complex)
    for n in range(1, n_max + 1):
        # n f_n = sum_{k=1}^{n} k g_k f_{n-k}
        s = np.dot(kg[1:n], a[n - 1 : 0 : -1]) if n > 1 else 0.0
        g[n] = (n * a[n] - s) / (n * a[0])
        kg[n] = n * g[n]
    return TruncatedSeries(g)


def series_sin(f):
    """Truncated ``sin(f)`` via complex exponentials."""
    e_pos = series_exp(f * 1j)
    e_neg = series_exp(f * -1j)
    return (e_pos - e_neg) * (-0.5j)


def series_conj_coeffs(f):
    """The conjugation ``(J f)(z) = conj(f(conj z))``: conjugate every coefficient."""
    return TruncatedSeries(np.conj(f.coeffs))
