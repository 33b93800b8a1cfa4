"""Complex polynomials in s, rational functions, roots and partial fractions.

Coefficients are stored lowest degree first: ``Poly([1, 2, 3])`` is
``1 + 2s + 3s^2``.  Every value is immutable.

A :class:`Poly` built as a product remembers its factors, so the roots of
``(s - 1)^3 (s + 2)`` are recovered from the linear factors instead of from
the ill-conditioned expanded coefficients.  Roots are only computed
numerically for factors whose factorization is unknown.
"""

import math

import numpy as np

from .errors import DomainError, NumericalError

#: absolute distance under which two poles/exponents are the same point
MERGE_TOL = 1e-8

# relative size under which a leading coefficient is treated as cancelled
_TRIM_REL = 1e-13
_EPS = np.finfo(float).eps


def _coeff_array(coeffs):
    c = np.array(coeffs, dtype=complex).ravel()
    if not np.all(np.isfinite(c)):
        raise DomainError("non-finite coefficient")
    return c


def _trim(c, scale=0.0):
    """Drop leading coefficients that are zero, or negligible against ``scale``."""
    tol = _TRIM_REL * scale
    n = len(c)
    while n and abs(c[n - 1]) <= tol:
        n -= 1
    return c[:n]


def _check_scalar(x):
    x = complex(x)
    if not (math.isfinite(x.real) and math.isfinite(x.imag)):
        raise DomainError("non-finite scalar")
    return x


class Poly:
    """Dense polynomial in s with complex coefficients."""

    __slots__ = ("coeffs", "_factors", "_roots")

    def __init__(self, coeffs=(), _factors=None):
        c = _trim(_coeff_array(coeffs))
        c.flags.writeable = False
        self.coeffs = c
        # tuple of non-constant Polys whose product is self up to a constant
        self._factors = _factors
        self._roots = None

    @classmethod
    def from_roots(cls, roots, lead=1.0):
        roots = [_check_scalar(r) for r in roots]
        factors = tuple(cls([-r, 1.0]) for r in roots)
        c = np.array([1.0 + 0j])
        for r in roots:
            c = np.convolve(c, [-r, 1.0])
        return cls(c * lead, _factors=factors)

    @classmethod
    def monomial(cls, k, coeff=1.0):
        return cls([0.0] * k + [coeff])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if len(self.coeffs) else 0j

    @property
    def is_zero(self):
        return len(self.coeffs) == 0

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        out = np.zeros_like(x)
        for a in self.coeffs[::-1]:
            out = out * x + a
        return out if out.ndim else complex(out)

    def _factor_list(self):
        if self.degree < 1:
            return ()
        if self._factors is not None:
            return self._factors
        return (self,)

    def __neg__(self):
        return Poly(-self.coeffs, _factors=self._factors)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        c = np.zeros(n, dtype=complex)
        c[: len(self.coeffs)] += self.coeffs
        c[: len(other.coeffs)] += other.coeffs
        return Poly(_trim(c, max(self.norm(), other.norm())))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, Poly):
            if self.is_zero or other.is_zero:
                return Poly()
            return Poly(np.convolve(self.coeffs, other.coeffs),
                        _factors=self._factor_list() + other._factor_list())
        k = _check_scalar(other)
        if k == 0:
            return Poly()
        return Poly(self.coeffs * k, _factors=self._factors)

    __rmul__ = __mul__

    def __truediv__(self, k):
        k = _check_scalar(k)
        if k == 0:
            raise DomainError("division of a polynomial by zero")
        return Poly(self.coeffs / k, _factors=self._factors)

    def __pow__(self, n):
        if n < 0:
            raise DomainError("negative power of a polynomial")
        out = Poly([1.0])
        for _ in range(n):
            out = out * self
        return out

    def norm(self):
        return float(np.max(np.abs(self.coeffs))) if len(self.coeffs) else 0.0

    def divrem(self, other):
        other = _as_poly(other)
        if other.is_zero:
            raise DomainError("division by the zero polynomial")
        if self.degree < other.degree:
            return Poly(), self
        r = self.coeffs.copy()
        db = other.degree
        q = np.zeros(self.degree - db + 1, dtype=complex)
        for k in range(len(q) - 1, -1, -1):
            q[k] = r[k + db] / other.lead
            r[k: k + db + 1] -= q[k] * other.coeffs
        return Poly(q), Poly(_trim(r[:db], self.norm()))

    def deriv(self):
        if self.degree < 1:
            return Poly()
        return Poly(self.coeffs[1:] * np.arange(1, len(self.coeffs)))

    def shifted(self, a):
        """Return the polynomial ``p(s + a)``."""
        a = _check_scalar(a)
        c = self.coeffs.copy()
        n = len(c)
        # repeated synthetic division (Taylor shift)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] += a * c[j + 1]
        factors = None
        if self._factors is not None:
            factors = tuple(f.shifted(a) for f in self._factors)
        out = Poly(c, _factors=factors)
        if self._roots is not None:
            out._roots = tuple(r - a for r in self._roots)
        return out

    def rescaled(self, q):
        """Return the polynomial ``p(s / q)``."""
        q = _check_scalar(q)
        if q == 0:
            raise DomainError("rescaling by zero")
        c = self.coeffs / q ** np.arange(len(self.coeffs))
        factors = None
        if self._factors is not None:
            factors = tuple(f.rescaled(q) for f in self._factors)
        out = Poly(c, _factors=factors)
        if self._roots is not None:
            out._roots = tuple(r * q for r in self._roots)
        return out

    def taylor(self, at, m):
        """First ``m`` Taylor coefficients of the polynomial around ``at``."""
        c = self.shifted(at).coeffs
        out = np.zeros(m, dtype=complex)
        k = min(m, len(c))
        out[:k] = c[:k]
        return out

    def roots(self):
        """All roots with multiplicity, as a tuple of complex numbers."""
        if self._roots is None:
            if self.degree < 1:
                self._roots = ()
            elif self.degree == 1:
                self._roots = (complex(-self.coeffs[0] / self.coeffs[1]),)
            elif self._factors is not None:
                self._roots = tuple(r for f in self._factors for r in f.roots())
            else:
                self._roots = tuple(
                    c for c, m in _numeric_roots(self.coeffs) for _ in range(m))
        return self._roots

    def distinct_roots(self):
        """Roots merged within :data:`MERGE_TOL`, as ``[(root, multiplicity)]``."""
        return merge_roots(self.roots())


def _as_poly(x):
    if isinstance(x, Poly):
        return x
    if isinstance(x, (list, tuple, np.ndarray)):
        return Poly(x)  # ascending coefficients
    x = _check_scalar(x)
    return Poly([x])


S = Poly([0.0, 1.0])


def cluster_points(points, tol=MERGE_TOL):
    """Single-linkage groups of indices whose points lie within ``tol``."""
    groups = []
    for i, z in enumerate(points):
        hit = [g for g in groups if any(abs(z - points[j]) <= tol for j in g)]
        merged = [i]
        for g in hit:
            merged.extend(g)
            groups.remove(g)
        groups.append(sorted(merged))
    return groups


def merge_roots(roots, tol=MERGE_TOL):
    """Cluster nearly equal roots into ``(mean, count)`` pairs."""
    roots = [complex(r) for r in roots]
    out = [(complex(np.mean([roots[j] for j in g])), len(g))
           for g in cluster_points(roots, tol)]
    out.sort(key=lambda cm: (round(cm[0].real, 12), round(cm[0].imag, 12)))
    return out


# --- numeric root finding ---------------------------------------------------

def _horner_abs(a, x):
    out = np.zeros_like(np.abs(x), dtype=float)
    for c in np.abs(a)[::-1]:
        out = out * np.abs(x) + c
    return out


def _aberth(a, maxiter=400):
    """Aberth-Ehrlich iteration on a monic polynomial with a[0] != 0."""
    n = len(a) - 1
    p = np.polynomial.polynomial
    da = a[1:] * np.arange(1, n + 1)
    radius = abs(a[0]) ** (1.0 / n)
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    for _ in range(maxiter):
        pz = p.polyval(z, a)
        done = np.abs(pz) <= 8 * _EPS * _horner_abs(a, z)
        if done.all():
            return z, True
        dpz = p.polyval(z, da)
        dpz = np.where(dpz == 0, _EPS, dpz)
        ratio = pz / dpz
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = np.sum(1.0 / diff, axis=1)
        w = ratio / (1.0 - ratio * s)
        z = np.where(done, z, z - w)
    return z, False


def _companion_roots(a):
    n = len(a) - 1
    m = np.zeros((n, n), dtype=complex)
    m[1:, :-1] = np.eye(n - 1)
    m[:, -1] = -a[:-1]
    return np.linalg.eigvals(m)


def _backward_error(a, z):
    pz = np.abs(np.polynomial.polynomial.polyval(z, a))
    return float(np.max(pz / np.maximum(_horner_abs(a, z), 1e-300)))


def _taylor_at(a, c, m):
    """First m Taylor coefficients of poly ``a`` at ``c`` plus their size bounds."""
    n = len(a) - 1
    b = np.zeros(m, dtype=complex)
    bound = np.zeros(m)
    for k in range(m):
        js = np.arange(k, n + 1)
        binom = np.array([math.comb(int(j), k) for j in js], dtype=float)
        powers = c ** (js - k)
        b[k] = np.sum(a[k:] * binom * powers)
        bound[k] = np.sum(np.abs(a[k:]) * binom * np.abs(powers))
    return b, bound


def _refine_multiple(a, c, m, steps=6):
    """Newton on the (m-1)-th derivative, which has a simple root at c."""
    pp = np.polynomial.polynomial
    d = pp.polyder(a, m - 1) if m > 1 else a
    dd = pp.polyder(d)
    best, best_val = c, abs(pp.polyval(c, d))
    for _ in range(steps):
        den = pp.polyval(c, dd)
        if den == 0:
            break
        c = c - pp.polyval(c, d) / den
        val = abs(pp.polyval(c, d))
        if val < best_val:
            best, best_val = c, val
        else:
            break
    return best


def _is_multiple_root(a, c, m, tol=1e-10):
    b, bound = _taylor_at(a, c, m)
    return bool(np.all(np.abs(b) <= tol * np.maximum(bound, 1e-300)))


def _cluster(a, z):
    """Agglomerate approximate roots into validated (center, multiplicity)."""
    clusters = [[complex(x)] for x in z]
    refused = set()
    while True:
        best = None
        for i in range(len(clusters)):
            for j in range(i + 1, len(clusters)):
                key = (tuple(sorted(clusters[i], key=_ckey)),
                       tuple(sorted(clusters[j], key=_ckey)))
                if key in refused:
                    continue
                ci, cj = np.mean(clusters[i]), np.mean(clusters[j])
                d = abs(ci - cj)
                if d <= 1e-2 * max(1.0, abs(ci)) and (best is None or d < best[0]):
                    best = (d, i, j, key)
        if best is None:
            break
        d, i, j, key = best
        merged = clusters[i] + clusters[j]
        m = len(merged)
        c = _refine_multiple(a, complex(np.mean(merged)), m)
        if d <= MERGE_TOL or _is_multiple_root(a, c, m):
            clusters[i] = merged
            del clusters[j]
        else:
            refused.add(key)
    out = []
    for g in clusters:
        m = len(g)
        c = complex(np.mean(g))
        c = _refine_multiple(a, c, m) if m > 1 else _newton_polish(a, c)
        out.append((complex(c), m))
    return out


def _ckey(x):
    return (x.real, x.imag)


def _newton_polish(a, z, steps=4):
    pp = np.polynomial.polynomial
    da = pp.polyder(a)
    best, best_val = z, abs(pp.polyval(z, a))
    for _ in range(steps):
        dz = pp.polyval(z, da)
        if dz == 0:
            break
        z = z - pp.polyval(z, a) / dz
        val = abs(pp.polyval(z, a))
        if val < best_val:
            best, best_val = z, val
        else:
            break
    return complex(best)


def _numeric_roots(coeffs):
    """Distinct roots of a coefficient vector as ``[(root, multiplicity)]``."""
    a = np.asarray(coeffs, dtype=complex)
    a = a / a[-1]
    nzero = 0
    while nzero < len(a) - 1 and a[nzero] == 0:
        nzero += 1
    a = a[nzero:]
    out = [(0j, nzero)] if nzero else []
    if len(a) <= 1:
        return out
    if len(a) == 2:
        return out + [(complex(-a[0]), 1)]
    z, ok = _aberth(a)
    if not ok:
        z = _companion_roots(a)
        err = _backward_error(a, z)
        if err > 1e-9:
            raise NumericalError("root finding did not converge", residual=err)
    out.extend(_cluster(a, z))
    return out


def poly_roots(p):
    """Roots of ``p`` with multiplicity (a multiset, as a sorted list)."""
    p = _as_poly(p)
    if p.degree < 1:
        raise DomainError("roots of a constant polynomial")
    return sorted(p.roots(), key=_ckey)


# --- rational functions -----------------------------------------------------

class RatFun:
    """Ratio ``num / den`` of polynomials in s with a monic denominator.

    No common factors are cancelled, so two RatFuns may denote the same
    element with different coefficients; use :meth:`distance` to compare.
    """

    __slots__ = ("num", "den")

    def __init__(self, num=0.0, den=1.0):
        num, den = _as_poly(num), _as_poly(den)
        if den.is_zero:
            raise DomainError("zero denominator")
        lead = den.lead
        if lead != 1:
            num, den = num / lead, den / lead
        self.num = num
        self.den = den

    def __repr__(self):
        return f"RatFun({list(self.num.coeffs)!r}, {list(self.den.coeffs)!r})"

    def __call__(self, x):
        return self.num(x) / self.den(x)

    @property
    def is_zero(self):
        return self.num.is_zero

    @property
    def is_proper(self):
        """True when the degree of the numerator is below the denominator's."""
        return self.num.degree < self.den.degree

    def as_constant(self, tol=1e-12):
        """Return ``c`` when the function equals the constant ``c``, else None."""
        if self.num.is_zero:
            return 0j
        if self.num.degree != self.den.degree:
            return None
        c = self.num.lead / self.den.lead
        diff = self.num - self.den * c
        if diff.norm() <= tol * max(1.0, self.num.norm()):
            return complex(c)
        return None

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __add__(self, other):
        other = _as_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if other.den.degree == 0:
            return RatFun(self.num + other.num * self.den, self.den)
        if self.den.degree == 0:
            return RatFun(self.num * other.den + other.num, other.den)
        return RatFun(self.num * other.den + other.num * self.den,
                      self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _as_ratfun(other) - self

    def __mul__(self, other):
        other = _as_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return RatFun()
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise DomainError("division by zero")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_ratfun(other) / self

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return RatFun(1.0) / self ** (-n)
        return RatFun(self.num ** n, self.den ** n)

    def distance(self, other):
        """Relative size of ``self - other`` after cross-multiplication."""
        other = _as_ratfun(other)
        a = self.num * other.den
        b = other.num * self.den
        scale = max(1.0, a.norm(), b.norm())
        return (a - b).norm() / scale if not (a - b).is_zero else 0.0


def _as_ratfun(x):
    if isinstance(x, RatFun):
        return x
    if isinstance(x, Poly):
        return RatFun(x)
    if isinstance(x, (int, float, complex, np.number)):
        return RatFun(_check_scalar(x))
    return NotImplemented


def ratfun(x):
    """Coerce a scalar, Poly or RatFun to a RatFun."""
    out = _as_ratfun(x)
    if out is NotImplemented:
        raise TypeError(f"cannot convert {type(x).__name__} to RatFun")
    return out


#: the differential operator s and the integral operator l = 1/s
S_OP = RatFun(S)
L_OP = RatFun(1.0, S)


def poly_arith(a, b, op):
    """Apply ``op`` in {'add', 'sub', 'mul', 'divrem'} to two polynomials."""
    a, b = _as_poly(a), _as_poly(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "divrem":
        return a.divrem(b)
    raise DomainError(f"unknown polynomial operation {op!r}")


class PfTerm:
    """One summand ``coeff / (s - pole)^order`` of a partial-fraction sum."""

    __slots__ = ("pole", "order", "coeff")

    def __init__(self, pole, order, coeff):
        if order < 1:
            raise DomainError("partial-fraction order must be positive")
        self.pole = complex(pole)
        self.order = int(order)
        self.coeff = complex(coeff)

    def __repr__(self):
        return f"PfTerm(pole={self.pole!r}, order={self.order}, coeff={self.coeff!r})"

    def __iter__(self):
        return iter((self.pole, self.order, self.coeff))


def _series_div(n, d, m):
    out = np.zeros(m, dtype=complex)
    for k in range(m):
        acc = n[k] - np.dot(out[:k], d[k:0:-1]) if k else n[0]
        out[k] = acc / d[0]
    return out


def partial_fractions(r):
    """Split ``r`` into a polynomial part and ``PfTerm`` summands.

    Returns ``(poly_part, terms)`` with
    ``r = poly_part + sum(c / (s - p)**n for p, n, c in terms)``.
    Coefficients at a pole of multiplicity m come from the Taylor expansion
    of ``(s - p)^m r(s)`` at ``p``.
    """
    r = ratfun(r)
    quot, rem = r.num.divrem(r.den)
    if rem.is_zero:
        return quot, []
    poles = r.den.distinct_roots()
    terms = []
    for i, (p, m) in enumerate(poles):
        numer = rem.taylor(p, m)
        other = np.zeros(m, dtype=complex)
        other[0] = 1.0
        for j, (pj, mj) in enumerate(poles):
            if j == i:
                continue
            for _ in range(mj):
                other = np.convolve(other, [p - pj, 1.0])[:m]
        g = _series_div(numer, other, m)
        for k in range(m):
            if g[k] != 0:
                terms.append(PfTerm(p, m - k, g[k]))
    return quot, terms


def recombine(poly_part, terms):
    """Inverse of :func:`partial_fractions`."""
    out = RatFun(poly_part)
    for p, n, c in terms:
        out = out + RatFun(c, Poly.from_roots([p] * n))
    return out


def substitute(r, shift=None, scale=None):
    """Substitute ``s -> s - shift`` or ``s -> s / scale`` in ``r``."""
    r = ratfun(r)
    if (shift is None) == (scale is None):
        raise DomainError("give exactly one of shift or scale")
    if shift is not None:
        a = _check_scalar(shift)
        if a == 0:
            return r
        return RatFun(r.num.shifted(-a), r.den.shifted(-a))
    q = float(scale) if np.isreal(scale) else scale
    if not np.isreal(q) or q <= 0:
        raise DomainError("scale must be a positive real")
    return RatFun(r.num.rescaled(q), r.den.rescaled(q))


def dds(r):
    """Derivative with respect to s (quotient rule)."""
    r = ratfun(r)
    if r.is_zero:
        return RatFun()
    num = r.num.deriv() * r.den - r.num * r.den.deriv()
    return RatFun(num, r.den * r.den)
