"""Symbolic-numeric operational calculus on the convolution quotient field.

Exact classes: rational functions of s (:class:`RatFun`), exponential
polynomials (:class:`ExpPoly`), finite sums of translations
(:class:`DelayElement`) and truncated series in l or h
(:class:`SeriesL`, :class:`SeriesH`).  :mod:`mikusinski.numeric` is an
independent sampled-function oracle.
"""

from .delay import DelayElement, JumpSeries, PiecewiseEP, h_pow
from .errors import (ClassOverflowError, DomainError, NumericalError,
                     ParseError, RangeError)
from .exppoly import ExpPoly
from .numeric import SampledFn
from .poly import L_OP, S_OP, PfTerm, Poly, RatFun, partial_fractions, poly_roots
from .series import SeriesH, SeriesL

__all__ = [
    "ClassOverflowError", "DelayElement", "DomainError", "ExpPoly", "JumpSeries",
    "L_OP", "NumericalError", "ParseError", "PfTerm", "PiecewiseEP", "Poly",
    "RangeError", "RatFun", "S_OP", "SampledFn", "SeriesH", "SeriesL", "h_pow",
    "partial_fractions", "poly_roots",
]
