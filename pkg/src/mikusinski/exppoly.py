"""Exponential polynomials {sum c t^k e^(lam t)} and their s-domain images.

A proper rational function of s is exactly the image of an exponential
polynomial, with ``k! / (s - lam)^(k+1)  <->  t^k e^(lam t)``.  Products in
the convolution ring are computed through that bijection.
"""

import math

import numpy as np

from . import poly as _poly
from .errors import DomainError
from .poly import MERGE_TOL, Poly, RatFun, cluster_points


def _ckey(z):
    return (round(z.real, 10), round(z.imag, 10))


class ExpPoly:
    """Finite sum of terms ``c_{lam,k} t^k e^(lam t)``.

    ``terms`` is a tuple of ``(lam, coeffs)`` pairs sorted by exponent, where
    ``coeffs[k]`` multiplies ``t^k e^(lam t)``.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        if isinstance(terms, dict):
            terms = terms.items()
        pairs = []
        for lam, coeffs in terms:
            lam = complex(lam)
            c = np.array(coeffs, dtype=complex).ravel()
            if not (np.all(np.isfinite(c)) and np.isfinite(lam)):
                raise DomainError("non-finite exponential polynomial")
            pairs.append((lam, c))
        merged = []
        for g in cluster_points([lam for lam, _ in pairs], MERGE_TOL):
            center = complex(np.mean([pairs[j][0] for j in g]))
            n = max(len(pairs[j][1]) for j in g)
            acc = np.zeros(n, dtype=complex)
            for j in g:
                acc[: len(pairs[j][1])] += pairs[j][1]
            while len(acc) and acc[-1] == 0:
                acc = acc[:-1]
            if len(acc):
                acc.flags.writeable = False
                merged.append((center, acc))
        merged.sort(key=lambda p: _ckey(p[0]))
        self.terms = tuple(merged)

    @classmethod
    def from_triples(cls, triples):
        """Build from ``(lam, k, c)`` triples meaning ``c t^k e^(lam t)``."""
        terms = []
        for lam, k, c in triples:
            coeffs = np.zeros(int(k) + 1, dtype=complex)
            coeffs[int(k)] = c
            terms.append((lam, coeffs))
        return cls(terms)

    @classmethod
    def exp(cls, lam, c=1.0):
        return cls([(lam, [c])])

    @classmethod
    def constant(cls, c):
        return cls([(0.0, [c])])

    def __repr__(self):
        body = ", ".join(f"{lam!r}: {list(c)!r}" for lam, c in self.terms)
        return f"ExpPoly({{{body}}})"

    @property
    def is_zero(self):
        return not self.terms

    def triples(self):
        for lam, coeffs in self.terms:
            for k, c in enumerate(coeffs):
                if c != 0:
                    yield lam, k, c

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for lam, coeffs in self.terms:
            acc = np.zeros(t.shape, dtype=complex)
            for c in coeffs[::-1]:
                acc = acc * t + c
            out += acc * np.exp(lam * t)
        return out if out.ndim else complex(out)

    def __add__(self, other):
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return ExpPoly(self.terms + other.terms)

    def __neg__(self):
        return ExpPoly((lam, -c) for lam, c in self.terms)

    def __sub__(self, other):
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, k):
        # scalar multiple only; the ring product is convolve()
        if not isinstance(k, (int, float, complex, np.number)):
            return NotImplemented
        return ExpPoly((lam, c * k) for lam, c in self.terms)

    __rmul__ = __mul__

    def distance(self, other):
        """Largest coefficient difference after matching exponents."""
        diff = self - other
        if diff.is_zero:
            return 0.0
        return max(float(np.max(np.abs(c))) for _, c in diff.terms)

    def norm(self):
        if self.is_zero:
            return 0.0
        return max(float(np.max(np.abs(c))) for _, c in self.terms)

    def chop(self, tol=1e-12):
        """Drop coefficients below ``tol`` relative to the largest one."""
        cut = tol * self.norm()
        return ExpPoly((lam, np.where(np.abs(c) <= cut, 0, c))
                       for lam, c in self.terms)


def realize(r):
    """Split a rational function into ``(constant, ExpPoly)``.

    ``r`` must satisfy deg num <= deg den; anything more singular is not a
    constant plus a function.
    """
    r = _poly.ratfun(r)
    if r.num.degree > r.den.degree:
        raise DomainError("not a function element: numerator degree exceeds "
                          "denominator degree")
    quot, terms = _poly.partial_fractions(r)
    const = complex(quot.coeffs[0]) if not quot.is_zero else 0j
    f = ExpPoly.from_triples(
        (p, n - 1, c / math.factorial(n - 1)) for p, n, c in terms)
    return const, f


def unrealize(c, f):
    """Rational function of ``c + f`` (inverse of :func:`realize`)."""
    out = RatFun(complex(c))
    for lam, coeffs in f.terms:
        top = len(coeffs) - 1
        num = Poly()
        for k, a in enumerate(coeffs):
            if a != 0:
                num = num + Poly.from_roots([lam] * (top - k)) * (a * math.factorial(k))
        out = out + RatFun(num, Poly.from_roots([lam] * (top + 1)))
    return out


def evaluate(f, t):
    return f(t)


def convolve(a, b):
    """Convolution product ``int_0^t a(t - u) b(u) du``, computed exactly."""
    if a.is_zero or b.is_zero:
        return ExpPoly()
    const, g = realize(unrealize(0, a) * unrealize(0, b))
    return g


def exp_shift(alpha, f):
    """Multiply by ``e^(alpha t)``; in the s-domain, ``s -> s - alpha``."""
    alpha = complex(alpha)
    return ExpPoly((lam + alpha, c) for lam, c in f.terms)


def qscale(q, f):
    """The q-scaling ``a(t) -> q a(q t)``."""
    if not np.isreal(q) or float(np.real(q)) <= 0:
        raise DomainError("q must be a positive real")
    q = float(np.real(q))
    return ExpPoly((q * lam, c * q ** np.arange(1, len(c) + 1))
                   for lam, c in f.terms)


def dds(f):
    """Derivation d/ds: ``a(t) -> -t a(t)``."""
    return ExpPoly((lam, np.concatenate([[0], -c])) for lam, c in f.terms)


def ddl(f):
    """The derivation ``-s^2 d/ds`` (derivative with respect to l).

    The result can carry a constant, so a pair ``(const, ExpPoly)`` is
    returned.
    """
    if f.is_zero:
        return 0j, ExpPoly()
    r = _poly.dds(unrealize(0, f))
    return realize(RatFun(-(r.num * _poly.S * _poly.S), r.den))


def describe(f, const=0j, tol=1e-12):
    """Human-readable closed form, pairing conjugate terms into sin/cos."""
    const = complex(const)
    f = f.chop(tol)
    pieces = []
    if abs(const) > tol:
        pieces.append(_fmt_num(const))
    triples = list(f.triples())
    scale = max([abs(c) for _, _, c in triples] + [abs(const), 1e-300])
    real_form = _is_real(triples, scale * 1e-9)
    for lam, k, c in triples:
        if not real_form:
            pieces.append(_fmt_term(c, k, lam, None))
            continue
        if abs(lam.imag) <= MERGE_TOL:
            pieces.append(_fmt_term(c.real, k, lam.real, None))
        elif lam.imag > 0:
            cos_c, sin_c = 2 * c.real, -2 * c.imag
            if abs(cos_c) > tol * scale:
                pieces.append(_fmt_term(cos_c, k, lam.real, ("cos", lam.imag)))
            if abs(sin_c) > tol * scale:
                pieces.append(_fmt_term(sin_c, k, lam.real, ("sin", lam.imag)))
    if not pieces:
        return "0"
    text = " + ".join(pieces)
    return text.replace("+ -", "- ")


def _is_real(triples, tol):
    for lam, k, c in triples:
        if abs(lam.imag) <= MERGE_TOL:
            if abs(c.imag) > tol:
                return False
            continue
        mate = [c2 for lam2, k2, c2 in triples
                if k2 == k and abs(lam2 - lam.conjugate()) <= MERGE_TOL]
        if not mate or abs(mate[0] - c.conjugate()) > tol:
            return False
    return True


def _fmt_num(x):
    x = complex(x)
    if x.imag == 0:
        return f"{x.real:.12g}"
    if x.real == 0:
        return f"{x.imag:.12g}i"
    return f"({x.real:.12g}{x.imag:+.12g}i)"


def _fmt_term(c, k, lam, trig):
    factors = []
    if k == 1:
        factors.append("t")
    elif k > 1:
        factors.append(f"t^{k}")
    if lam != 0:
        factors.append("e^t" if lam == 1 else f"e^({_fmt_num(lam)}*t)")
    if trig is not None:
        name, w = trig
        factors.append(f"{name}(t)" if w == 1 else f"{name}({w:.12g}*t)")
    body = "*".join(factors)
    if not body:
        return _fmt_num(c)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{_fmt_num(c)}*{body}"
