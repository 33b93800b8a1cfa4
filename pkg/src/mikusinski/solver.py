"""Constant-coefficient linear ODEs and a scalar delay equation.

ODEs are solved in the s-domain: iterating ``f' = s f - f(0)`` gives
``f^(k) = s^k f - sum_(j<k) s^(k-1-j) f^(j)(0)``, so the equation becomes
algebraic in ``f``.
"""

import math

import numpy as np

from . import delay as _delay
from . import exppoly as _ep
from . import series as _series
from .errors import DomainError
from .exppoly import ExpPoly
from .poly import Poly, RatFun


class OdeProblem:
    """``sum_k coeffs[k] f^(k) = rhs`` with ``f^(j)(0) = init[j]``."""

    __slots__ = ("coeffs", "init", "rhs")

    def __init__(self, coeffs, init, rhs=None):
        coeffs = [complex(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            raise DomainError("zero characteristic polynomial")
        init = [complex(v) for v in init]
        if len(init) != len(coeffs) - 1:
            raise DomainError(f"order {len(coeffs) - 1} equation needs "
                              f"{len(coeffs) - 1} initial values, got {len(init)}")
        self.coeffs = tuple(coeffs)
        self.init = tuple(init)
        self.rhs = rhs if rhs is not None else ExpPoly()

    @property
    def order(self):
        return len(self.coeffs) - 1


def transfer(p):
    """The s-domain image ``F(s)`` of the solution."""
    char = Poly(p.coeffs)
    ic = Poly()
    for k, a in enumerate(p.coeffs):
        for j in range(k):
            ic = ic + Poly.monomial(k - 1 - j, a * p.init[j])
    return (_ep.unrealize(0, p.rhs) + RatFun(ic)) / RatFun(char)


def solve_lode(p):
    """Closed-form solution as an :class:`ExpPoly`."""
    const, f = _ep.realize(transfer(p))
    if abs(const) > 1e-9 * max(1.0, f.norm()):
        raise DomainError("solution is not a function")
    return f


def ep_derivative(f):
    """Ordinary t-derivative, term by term: ``(t^k e^(lam t))' =
    k t^(k-1) e^(lam t) + lam t^k e^(lam t)``."""
    out = []
    for lam, c in f.terms:
        d = lam * np.asarray(c, dtype=complex)
        d[:-1] += c[1:] * np.arange(1, len(c))
        out.append((lam, d))
    return ExpPoly(out)


def ode_residual(p, f):
    """Largest coefficient of ``sum a_k f^(k) - rhs`` (an ExpPoly)."""
    acc = ExpPoly()
    g = f
    for a in p.coeffs:
        acc = acc + g * a
        g = ep_derivative(g)
    return (acc - p.rhs).norm()


def init_error(p, f):
    """Largest deviation of ``f^(j)(0)`` from the prescribed values."""
    worst = 0.0
    g = f
    for v in p.init:
        worst = max(worst, abs(complex(g(0.0)) - v))
        g = ep_derivative(g)
    return worst


class DelayProblem:
    """``x(t) = forcing(t) + c x(t - 1)`` on ``[0, T]``, with x = 0 for t < 0."""

    __slots__ = ("c", "forcing", "T")

    def __init__(self, c, forcing, T):
        if not float(T) > 0:
            raise DomainError("horizon must be positive")
        self.c = complex(c)
        self.forcing = forcing
        self.T = float(T)


def solve_delay_geom(p):
    """Invert ``1 - c h`` as the h-series ``sum c^n h^n``.

    Terms with ``n > T`` vanish on ``[0, T]``, so the truncation at
    ``ceil(T)`` is exact there.
    """
    K = max(1, math.ceil(p.T))
    geo = _series.invert_unit(_series.SeriesH([1.0, -p.c], K))
    pieces = []
    for n, a in enumerate(geo.coeffs):
        if a != 0 and not p.forcing.is_zero:
            pieces.append((float(n), p.forcing * complex(a)))
    return _delay.PiecewiseEP(pieces)
