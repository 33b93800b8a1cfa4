"""Sampled time functions and quadrature: the independent numeric oracle.

Everything here works on values sampled on a uniform grid ``t_i = i T/N``;
nothing consults the exact s-domain machinery.
"""

import csv
import io
import math

import numpy as np

from .errors import DomainError
from .special import gamma, special, zeta  # noqa: F401  (re-exported)


class SampledFn:
    """Complex samples ``values[i] = f(i * T / N)`` for ``i = 0..N``."""

    __slots__ = ("T", "N", "values")

    def __init__(self, T, N, values):
        T, N = float(T), int(N)
        if not T > 0 or N < 2:
            raise DomainError("need T > 0 and N >= 2")
        v = np.array(values, dtype=complex).ravel()
        if len(v) != N + 1:
            raise DomainError(f"expected {N + 1} samples, got {len(v)}")
        if not np.all(np.isfinite(v)):
            raise DomainError("non-finite sample")
        v.flags.writeable = False
        self.T, self.N, self.values = T, N, v

    @property
    def dt(self):
        return self.T / self.N

    @property
    def t(self):
        return np.arange(self.N + 1) * self.dt

    def __repr__(self):
        return f"SampledFn(T={self.T!r}, N={self.N})"

    def _like(self, values):
        return SampledFn(self.T, self.N, values)

    def __add__(self, other):
        _same_grid(self, other)
        return self._like(self.values + other.values)

    def __sub__(self, other):
        _same_grid(self, other)
        return self._like(self.values - other.values)

    def __mul__(self, k):
        return self._like(self.values * complex(k))

    __rmul__ = __mul__

    def interp(self, x):
        """Linear interpolation at points ``x`` inside ``[0, T]``."""
        return np.interp(np.asarray(x, dtype=float), self.t, self.values)


def _same_grid(a, b):
    if a.N != b.N or abs(a.T - b.T) > 1e-12 * max(a.T, b.T):
        raise DomainError("sampled functions live on different grids")


def sample(f, T, N):
    """Evaluate a callable on the grid ``i T / N``."""
    T, N = float(T), int(N)
    if not T > 0 or N < 2:
        raise DomainError("need T > 0 and N >= 2")
    t = np.arange(N + 1) * (T / N)
    vals = np.asarray(f(t), dtype=complex)
    if vals.ndim == 0:
        vals = np.full(N + 1, complex(vals))
    return SampledFn(T, N, vals)


def conv_trapezoid(a, b):
    """Composite-trapezoid convolution ``int_0^t a(t-u) b(u) du``.

    Direct O(N^2) summation with a fixed order per output point.
    """
    _same_grid(a, b)
    x, y = a.values, b.values
    full = np.convolve(x, y)[: a.N + 1]
    return a._like(a.dt * (full - 0.5 * (x * y[0] + x[0] * y)))


def _product_trapezoid_weights(lam, n):
    """Per-cell weights of ``int x^(lam-1) g(x) dx`` with g linear on [j, j+1]."""
    j = np.arange(n, dtype=float)
    a = ((j + 1) ** lam - j ** lam) / lam
    b = ((j + 1) ** (lam + 1) - j ** (lam + 1)) / (lam + 1)
    left = (j + 1) * a - b
    right = b - j * a
    return left, right


def conv_frac_power(alpha, lam, b):
    """Convolution of ``t^(lam-1) e^(alpha t) / Gamma(lam)`` with ``b``.

    Product-trapezoid rule: the weakly singular power is integrated exactly
    against the piecewise-linear interpolant of the smooth remainder, which
    keeps second-order accuracy for ``0 < lam < 1``.
    """
    if not lam > 0:
        raise DomainError("lam must be positive")
    n, dt = b.N, b.dt
    left, right = _product_trapezoid_weights(lam, n + 1)
    u = np.exp(complex(alpha) * b.t) / complex(gamma(lam))
    w = left[: n + 1].astype(complex)
    w[1:] += right[:n]
    full = np.convolve(w * u, b.values)[: n + 1]
    # the last node of output i only sees the cell to its left
    out = full - left[: n + 1] * u * b.values[0]
    return b._like(dt ** lam * out)


def frac_power_fn(alpha, lam, T, N):
    """Samples of ``t^(lam-1) e^(alpha t) / Gamma(lam)``.

    For ``lam < 1`` the value at ``t = 0`` is singular and stored as 0.
    """
    if not lam > 0:
        raise DomainError("lam must be positive; use the rational-function path")
    g = complex(gamma(lam))
    t = np.arange(int(N) + 1) * (float(T) / int(N))
    with np.errstate(divide="ignore"):
        vals = np.where(t > 0, t ** (lam - 1.0), 1.0 if lam == 1 else 0.0)
    return SampledFn(T, N, vals * np.exp(complex(alpha) * t) / g)


def conv_frac_powers(alpha, lam, mu, T, N):
    """Trapezoid convolution of two sampled fractional powers with the
    leading generalized Euler-Maclaurin endpoint corrections.

    Near ``x = 0`` the integrand behaves like ``x^(lam-1) G(x)``, where
    the plain rule overshoots by ``zeta(1-lam) G(0) dt^lam``; the other
    endpoint is the same with ``mu``. Without the correction the error is
    first order when ``lam`` or ``mu`` is slightly above 1, because the
    stored value at ``t = 0`` is 0 while the neighbouring sample is ~1.
    """
    a = frac_power_fn(alpha, lam, T, N)
    b = frac_power_fn(alpha, mu, T, N)
    out = conv_trapezoid(a, b).values.copy()
    dt = a.dt
    for p, other in ((lam, b), (mu, a)):
        if p != 1:  # an exact sample at 0 needs no correction
            out -= zeta(1 - p) * dt ** p / complex(gamma(p)) * other.values
    out[0] = 0
    return a._like(out)


# --- pointwise operators --------------------------------------------------------

def mul_exp(a, alpha):
    return a._like(np.exp(complex(alpha) * a.t) * a.values)


def mul_negt(a):
    return a._like(-a.t * a.values)


def tau(a, q):
    """``q a(q t)``; for ``q > 1`` the horizon shrinks to ``T / q``."""
    q = float(q)
    if not q > 0:
        raise DomainError("q must be positive")
    n = a.N if q <= 1 else int(math.floor(a.N / q + 1e-9))
    if n < 2:
        raise DomainError("horizon too short after scaling")
    t = np.arange(n + 1) * a.dt
    x = np.minimum(q * t, a.T)
    return SampledFn(n * a.dt, n, q * a.interp(x))


def shift(a, lam):
    """Delay by ``lam >= 0`` with zero padding (0 at ``t <= lam``)."""
    lam = float(lam)
    if lam < 0:
        raise DomainError("negative shift")
    t = a.t
    vals = np.where(t > lam, a.interp(np.maximum(t - lam, 0.0)), 0)
    return a._like(vals)


def num_op(a, op, param=None):
    """Dispatch ``op`` in {'mul_exp', 'mul_negt', 'tau', 'shift'}."""
    if op == "mul_exp":
        return mul_exp(a, param)
    if op == "mul_negt":
        return mul_negt(a)
    if op == "tau":
        return tau(a, param)
    if op == "shift":
        return shift(a, param)
    raise DomainError(f"unknown operation {op!r}")


def compare(a, b, exclude_knots=()):
    """Max ``|a - b|`` over common grid points more than one step from a knot."""
    if abs(a.dt - b.dt) > 1e-12 * max(a.dt, b.dt):
        raise DomainError("grids have different spacing")
    n = min(a.N, b.N)
    t = np.arange(n + 1) * a.dt
    keep = np.ones(n + 1, dtype=bool)
    for k in exclude_knots:
        keep &= np.abs(t - k) > a.dt * (1 + 1e-9)
    if not keep.any():
        raise DomainError("no grid points left to compare")
    d = np.abs(a.values[: n + 1] - b.values[: n + 1])[keep]
    return float(np.max(d))


# --- fractional powers on the monomial representation ---------------------------

class FracMonomial:
    """``coeff * t^power * e^(alpha t)`` with real ``power > -1``."""

    __slots__ = ("coeff", "power", "alpha")

    def __init__(self, coeff, power, alpha=0.0):
        if not power > -1:
            raise DomainError("power must exceed -1 to be locally integrable")
        self.coeff, self.power, self.alpha = complex(coeff), float(power), complex(alpha)

    @classmethod
    def frac_power(cls, alpha, lam):
        """Realization of ``(s - alpha)^(-lam)`` for ``lam > 0``."""
        return cls(1 / complex(gamma(lam)), lam - 1, alpha)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.coeff * t ** self.power * np.exp(self.alpha * t)

    def convolve(self, other):
        """Exact convolution via the Beta integral."""
        if abs(self.alpha - other.alpha) > 1e-14:
            raise DomainError("exponential factors differ")
        p, r = self.power, other.power
        beta = gamma(p + 1) * gamma(r + 1) / gamma(p + r + 2)
        return FracMonomial(self.coeff * other.coeff * beta, p + r + 1, self.alpha)


# --- CSV -----------------------------------------------------------------------

def to_csv(a, dest=None):
    """Write ``t,re,im`` rows with 17 significant digits.

    ``dest`` may be a path or a text stream; with ``None`` the CSV text is
    returned.
    """
    buf = io.StringIO() if dest is None else None
    stream = buf
    close = False
    if dest is not None:
        if hasattr(dest, "write"):
            stream = dest
        else:
            stream = open(dest, "w", newline="")
            close = True
    try:
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(["t", "re", "im"])
        for t, v in zip(a.t, a.values):
            w.writerow([f"{t:.17g}", f"{v.real:.17g}", f"{v.imag:.17g}"])
    finally:
        if close:
            stream.close()
    return buf.getvalue() if buf is not None else None


def read_csv(src):
    """Inverse of :func:`to_csv`; returns ``(t, values)`` arrays.

    ``src`` is a path or a text stream.
    """
    if hasattr(src, "read"):
        rows = list(csv.reader(src))
    else:
        with open(src, newline="") as fh:
            rows = list(csv.reader(fh))
    if not rows or rows[0] != ["t", "re", "im"]:
        raise DomainError("bad CSV header")
    data = np.array(rows[1:], dtype=float)
    return data[:, 0], data[:, 1] + 1j * data[:, 2]
