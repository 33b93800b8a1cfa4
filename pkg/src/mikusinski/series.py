"""Truncated power series in l (convergent series) and in h (formal series).

A series carries its truncation order K: coefficients 0..K are known and
nothing beyond K is ever reported.  Binary operations truncate to the
smaller order of their operands.
"""

import math

import numpy as np

from .errors import DomainError


class _Series:
    __slots__ = ("coeffs",)
    var = "?"

    def __init__(self, coeffs, order=None):
        c = np.array(coeffs, dtype=complex).ravel()
        if order is None:
            order = len(c) - 1
        order = int(order)
        if order < 0:
            raise DomainError("truncation order must be non-negative")
        if not np.all(np.isfinite(c)):
            raise DomainError("non-finite series coefficient")
        out = np.zeros(order + 1, dtype=complex)
        k = min(len(c), order + 1)
        out[:k] = c[:k]
        out.flags.writeable = False
        self.coeffs = out

    @property
    def order(self):
        return len(self.coeffs) - 1

    def __repr__(self):
        return f"{type(self).__name__}({list(self.coeffs)!r})"

    def _check(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return type(self)([other], self.order)
        if type(other) is not type(self):
            return NotImplemented
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        k = min(self.order, other.order)
        return type(self)(self.coeffs[: k + 1] + other.coeffs[: k + 1])

    __radd__ = __add__

    def __neg__(self):
        return type(self)(-self.coeffs)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return type(self)(self.coeffs * other)
        return mul(self, other)

    __rmul__ = __mul__

    def truncate(self, order):
        return type(self)(self.coeffs, min(order, self.order))

    def distance(self, other):
        """Max coefficient difference over the common known prefix."""
        k = min(self.order, other.order)
        return float(np.max(np.abs(self.coeffs[: k + 1] - other.coeffs[: k + 1])))


class SeriesL(_Series):
    """Truncated ``sum a_n l^n``."""

    var = "l"


class SeriesH(_Series):
    """Truncated ``sum a_n h^n``."""

    var = "h"


def mul(a, b):
    """Cauchy product, truncated to the smaller order."""
    if type(a) is not type(b) or not isinstance(a, _Series):
        raise DomainError("series of different kinds cannot be multiplied")
    k = min(a.order, b.order)
    return type(a)(np.convolve(a.coeffs[: k + 1], b.coeffs[: k + 1])[: k + 1])


def compose(a, w):
    """Generic composition ``sum a_n w^n`` for ``w`` with zero constant term."""
    if w.coeffs[0] != 0:
        raise DomainError("inner series must have zero constant term")
    k = min(a.order, w.order)
    out = np.zeros(k + 1, dtype=complex)
    power = np.zeros(k + 1, dtype=complex)
    power[0] = 1.0
    for n in range(k + 1):
        out += a.coeffs[n] * power
        power = np.convolve(power, w.coeffs[: k + 1])[: k + 1]
    return type(a)(out)


# --- C{l} ---------------------------------------------------------------------

def qscale(q, a):
    """``a_n -> a_n q^n`` (the q-scaling on series in l)."""
    if not np.isreal(q) or float(np.real(q)) <= 0:
        raise DomainError("q must be a positive real")
    q = float(np.real(q))
    return SeriesL(a.coeffs * q ** np.arange(a.order + 1))


def ddl(a):
    """Derivative in l, ``sum n a_n l^(n-1)``; the order drops by one."""
    if a.order == 0:
        return type(a)([0.0])
    return type(a)(a.coeffs[1:] * np.arange(1, a.order + 1))


def dds(a):
    """d/ds on either kind of series.

    In l it moves ``-n a_n`` to index ``n+1`` (kept at order K); in h it
    multiplies ``a_n`` by ``-n`` in place.
    """
    n = np.arange(a.order + 1)
    if isinstance(a, SeriesL):
        out = np.zeros(a.order + 1, dtype=complex)
        out[1:] = (-n * a.coeffs)[:-1]
        return SeriesL(out)
    if isinstance(a, SeriesH):
        return SeriesH(-n * a.coeffs)
    raise DomainError("expected a series")


def exp_shift(alpha, a):
    """``e^(alpha t)`` multiplication.

    In l this is the substitution ``l -> l / (1 - alpha l)`` evaluated by
    ``b_(n+1) = sum_i C(n, i) alpha^(n-i) a_(i+1)``; in h each ``h^n``
    picks up ``e^(alpha n)``.
    """
    alpha = complex(alpha)
    if isinstance(a, SeriesH):
        return SeriesH(a.coeffs * np.exp(alpha * np.arange(a.order + 1)))
    K = a.order
    out = np.zeros(K + 1, dtype=complex)
    out[0] = a.coeffs[0]
    for n in range(K):
        i = np.arange(n + 1)
        binom = np.array([math.comb(n, int(j)) for j in i], dtype=float)
        out[n + 1] = np.sum(binom * alpha ** (n - i) * a.coeffs[1: n + 2])
    return SeriesL(out)


def realize(a):
    """Return ``(a_0, f)`` with ``f(t) = sum_(n>=1) a_n t^(n-1) / (n-1)!``."""
    c = a.coeffs[1:] / np.array([math.factorial(n) for n in range(a.order)],
                                dtype=float)

    def f(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for x in c[::-1]:
            out = out * t + x
        return out if out.ndim else complex(out)

    return complex(a.coeffs[0]), f


def bessel_j0(alpha, order):
    """Series in l of ``{J_0(alpha t)}``: ``C(-1/2, k) alpha^(2k)`` at ``l^(2k+1)``."""
    if order < 1:
        raise DomainError("order must be at least 1")
    alpha = complex(alpha)
    c = np.zeros(order + 1, dtype=complex)
    b = 1.0
    for k in range((order - 1) // 2 + 1):
        if k:
            b *= (-0.5 - k + 1) / k
        c[2 * k + 1] = b * alpha ** (2 * k)
    return SeriesL(c)


# --- C[[h]] -------------------------------------------------------------------

def mahler(d, a):
    """``a_n h^n -> a_n h^(dn)``, kept at the input order."""
    if int(d) != d or d < 2:
        raise DomainError("d must be an integer >= 2")
    d = int(d)
    out = np.zeros(a.order + 1, dtype=complex)
    idx = np.arange(0, a.order + 1, d)
    out[idx] = a.coeffs[: len(idx)]
    return SeriesH(out)


def ddh(a):
    """Derivative in h; the order drops by one."""
    return ddl(a)


def invert_unit(a):
    """Multiplicative inverse of a series with non-zero constant term."""
    if a.coeffs[0] == 0:
        raise DomainError("not a unit: zero constant term")
    K = a.order
    b = np.zeros(K + 1, dtype=complex)
    b[0] = 1 / a.coeffs[0]
    for n in range(1, K + 1):
        b[n] = -np.dot(a.coeffs[1: n + 1], b[n - 1:: -1][:n]) / a.coeffs[0]
    return type(a)(b)


def shift_h(a, k):
    """Multiply by ``h^k`` (k >= 0), keeping the order."""
    out = np.zeros(a.order + 1, dtype=complex)
    out[k:] = a.coeffs[: a.order + 1 - k]
    return SeriesH(out)
