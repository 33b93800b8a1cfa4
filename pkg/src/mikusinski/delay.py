"""Translation operators h^lam and finite sums  sum_i h^(lam_i) R_i(s).

``h^lam`` delays a function by ``lam``: ``h^lam {f(t)}`` is ``f(t - lam)``
for ``t > lam`` and 0 before.  Delays add under multiplication, so a
:class:`DelayElement` is a map ``lam -> RatFun`` multiplied like a group
algebra.  Negative delays are legitimate field elements but have no
function realization.
"""

import math

import numpy as np

from . import exppoly as _ep
from . import poly as _poly
from .errors import DomainError
from .exppoly import ExpPoly
from .poly import RatFun, cluster_points

DELAY_TOL = 1e-12


def _real_delay(lam):
    lam = complex(lam)
    if lam.imag != 0 or not math.isfinite(lam.real):
        raise DomainError("delays must be finite real numbers")
    return lam.real


class DelayElement:
    """Finite sum ``sum h^lam R(s)``, stored as sorted ``(lam, RatFun)`` parts."""

    __slots__ = ("parts",)

    def __init__(self, parts=()):
        if isinstance(parts, dict):
            parts = parts.items()
        pairs = [(_real_delay(lam), _poly.ratfun(r)) for lam, r in parts]
        merged = []
        for g in cluster_points([lam for lam, _ in pairs], DELAY_TOL):
            lam = pairs[g[0]][0]
            r = pairs[g[0]][1]
            for j in g[1:]:
                r = r + pairs[j][1]
            if not r.is_zero:
                merged.append((lam, r))
        merged.sort(key=lambda p: p[0])
        self.parts = tuple(merged)

    @classmethod
    def of(cls, x):
        """Promote a scalar, RatFun or DelayElement."""
        if isinstance(x, DelayElement):
            return x
        return cls([(0.0, _poly.ratfun(x))])

    def __repr__(self):
        body = ", ".join(f"{lam!r}: {r!r}" for lam, r in self.parts)
        return f"DelayElement({{{body}}})"

    @property
    def is_zero(self):
        return not self.parts

    @property
    def delays(self):
        return tuple(lam for lam, _ in self.parts)

    def part(self, lam):
        for mu, r in self.parts:
            if abs(mu - lam) <= DELAY_TOL:
                return r
        return RatFun()

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return DelayElement(self.parts + other.parts)

    __radd__ = __add__

    def __neg__(self):
        return DelayElement((lam, -r) for lam, r in self.parts)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return DelayElement((a + b, r * q)
                            for a, r in self.parts for b, q in other.parts)

    __rmul__ = __mul__

    def inverse(self):
        """Inverse of a single-part element ``h^lam R``."""
        if len(self.parts) != 1:
            raise DomainError("only a single h-power times a rational function "
                              "can be inverted in this class")
        lam, r = self.parts[0]
        if r.is_zero:
            raise DomainError("division by zero")
        return DelayElement([(-lam, 1 / r)])

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n):
        n = int(n)
        base = self if n >= 0 else self.inverse()
        out = DelayElement.of(1.0)
        for _ in range(abs(n)):
            out = out * base
        return out

    def distance(self, other):
        """Largest part-wise RatFun distance after matching delays."""
        other = _coerce(other)
        worst = 0.0
        for lam in sorted(set(self.delays) | set(other.delays)):
            worst = max(worst, self.part(lam).distance(other.part(lam)))
        return worst

    def h_coefficients(self, tol=1e-12):
        """Coefficients ``a_n`` when the element is ``sum a_n h^n``, else None.

        Requires non-negative integer delays and constant parts.
        """
        coeffs = {}
        for lam, r in self.parts:
            n = round(lam)
            if n < 0 or abs(lam - n) > DELAY_TOL:
                return None
            c = r.as_constant(tol)
            if c is None:
                return None
            coeffs[n] = c
        if not coeffs:
            return [0j]
        out = [0j] * (max(coeffs) + 1)
        for n, c in coeffs.items():
            out[n] = c
        return out


def _coerce(x):
    if isinstance(x, DelayElement):
        return x
    try:
        return DelayElement.of(x)
    except TypeError:
        return NotImplemented


def h_pow(lam):
    """The translation operator ``h^lam`` (any real ``lam``)."""
    return DelayElement([(lam, RatFun(1.0))])


def arith(a, b, op):
    a, b = DelayElement.of(a), DelayElement.of(b)
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise DomainError(f"unknown operation {op!r}")


class PiecewiseEP:
    """Function ``sum_i H(t - lam_i) f_i(t - lam_i)`` plus a field constant.

    ``const`` is the constant part of the element (a multiple of the unit of
    the field), not a value added pointwise.  Pieces are left-continuous at
    their knots; a piece at delay 0 is active from ``t = 0`` on.
    """

    __slots__ = ("pieces", "const")

    def __init__(self, pieces=(), const=0j):
        pieces = sorted(((float(lam), f) for lam, f in pieces), key=lambda p: p[0])
        for (a, _), (b, _) in zip(pieces, pieces[1:]):
            if not b > a:
                raise DomainError("piece delays must be strictly increasing")
        self.pieces = tuple(pieces)
        self.const = complex(const)

    def __repr__(self):
        return f"PiecewiseEP({list(self.pieces)!r}, const={self.const!r})"

    @property
    def knots(self):
        return tuple(lam for lam, _ in self.pieces)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for lam, f in self.pieces:
            active = (t > lam) | (lam == 0)
            shifted = np.where(active, t - lam, 0.0)
            out += np.where(active, f(shifted), 0)
        return out if out.ndim else complex(out)


def realize(e):
    """Piecewise exponential-polynomial realization of a delay element."""
    e = DelayElement.of(e)
    const = 0j
    pieces = []
    for lam, r in e.parts:
        if lam < -DELAY_TOL:
            raise DomainError("not realizable as a function: negative delay")
        if r.num.degree > r.den.degree:
            raise DomainError("not realizable as a function: improper part")
        c, f = _ep.realize(r)
        if lam > DELAY_TOL and abs(c) > 1e-12 * max(1.0, f.norm()):
            raise DomainError("not realizable as a function: delayed constant")
        if lam <= DELAY_TOL:
            const += c
            lam = 0.0
        if not f.is_zero:
            pieces.append((lam, f))
    return PiecewiseEP(pieces, const)


class JumpSeries:
    """Truncated series ``sum a_n h^(b_n)`` with strictly increasing delays."""

    __slots__ = ("coeffs", "delays")

    def __init__(self, coeffs, delays):
        coeffs = [complex(c) for c in coeffs]
        delays = [float(b) for b in delays]
        if len(coeffs) != len(delays):
            raise DomainError("coefficient and delay counts differ")
        if any(b < 0 for b in delays):
            raise DomainError("delays must be non-negative")
        if any(not b > a for a, b in zip(delays, delays[1:])):
            raise DomainError("delays must be strictly increasing")
        self.coeffs = tuple(coeffs)
        self.delays = tuple(delays)

    def to_element(self):
        return DelayElement((b, RatFun(a)) for a, b in zip(self.coeffs, self.delays))


def jump_realize(j):
    """The continuous function ``g(t) = sum a_n max(0, t - b_n)``.

    The series itself equals ``g / l^2``.
    """
    if not isinstance(j, JumpSeries):
        raise DomainError("expected a JumpSeries")
    return PiecewiseEP((b, ExpPoly([(0.0, [0.0, a])]))
                       for a, b in zip(j.coeffs, j.delays))


def jump_extract(g, n):
    """Recover ``a_0 .. a_n`` from ``g(t) = sum a_k max(0, t - k)``.

    The second difference ``g(m+1) - 2 g(m) + g(m-1)`` isolates ``a_m``
    because every hat ``max(0, t-k)`` is linear away from its own knot.
    """
    for lam, f in g.pieces:
        if abs(lam - round(lam)) > DELAY_TOL:
            raise DomainError("knots must be integers")
        for mu, coeffs in f.terms:
            if abs(mu) > 0 or len(coeffs) > 2:
                raise DomainError("expected a piecewise linear function")
    if g.const != 0:
        raise DomainError("expected a function without constant part")
    t = np.arange(-1, n + 2, dtype=float)
    v = np.where(t < 0, 0, g(np.maximum(t, 0)))
    return v[2:] - 2 * v[1:-1] + v[:-2]


def qscale(q, e):
    """``h^lam R(s) -> h^(lam/q) R(s/q)``."""
    q = float(np.real(q))
    if q <= 0:
        raise DomainError("q must be a positive real")
    return DelayElement((lam / q, _poly.substitute(r, scale=q))
                        for lam, r in DelayElement.of(e).parts)


def mahler(d, e):
    """Mahler operator (q = 1/d): ``h^lam R(s) -> h^(d lam) R(d s)``."""
    if int(d) != d or d < 2:
        raise DomainError("d must be an integer >= 2")
    d = int(d)
    return DelayElement((d * lam, _poly.substitute(r, scale=1.0 / d))
                        for lam, r in DelayElement.of(e).parts)


def dds(e):
    """d/ds, using ``d/ds h^lam = -lam h^lam`` and the Leibniz rule."""
    return DelayElement((lam, _poly.dds(r) - r * lam)
                        for lam, r in DelayElement.of(e).parts)


def ddh(e):
    """``-h^(-1) d/ds``, the derivation with ``h -> 1``."""
    return DelayElement((lam - 1.0, -r) for lam, r in dds(e).parts)


def exp_shift(alpha, e):
    """Multiplication of the realization by ``e^(alpha t)``.

    A delayed piece picks up ``e^(alpha lam)``: ``h^lam R(s) ->
    e^(alpha lam) h^lam R(s - alpha)``.
    """
    alpha = complex(alpha)
    return DelayElement(
        (lam, _poly.substitute(r, shift=alpha) * complex(np.exp(alpha * lam)))
        for lam, r in DelayElement.of(e).parts)
