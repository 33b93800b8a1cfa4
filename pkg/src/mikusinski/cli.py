"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 domain error (including class
overflow and unrealizable elements), 3 numerical failure, 4 a ``verify``
whose deviation exceeds the tolerance.
"""

import argparse
import math
import os
import sys

import numpy as np

from . import delay as _delay
from . import exppoly as _ep
from . import expr as _expr
from . import numeric as _num
from . import series as _series
from . import solver as _solver
from .delay import DelayElement
from .errors import DomainError, NumericalError, ParseError
from .poly import RatFun
from .series import SeriesH, SeriesL

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_NUMERIC, EXIT_MISMATCH = 0, 1, 2, 3, 4

_DEFAULT_GRID = "10,1000"
_DEFAULT_TOL = 1e-9


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _grid(text):
    try:
        t, n = text.split(",")
        T, N = float(t), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError("expected T,N such as 10,1000") from None
    if not (T > 0 and math.isfinite(T)) or N < 2:
        raise argparse.ArgumentTypeError("need T > 0 and N >= 2")
    return T, N


def _global_flags(default):
    # the same flags are accepted before and after the subcommand; only the
    # top-level parser supplies defaults so a later value is never clobbered
    p = argparse.ArgumentParser(add_help=False, argument_default=default)
    p.add_argument("--grid", type=_grid, metavar="T,N",
                   help=f"sampling grid (default {_DEFAULT_GRID})")
    p.add_argument("--tol", type=float, help=f"tolerance (default {_DEFAULT_TOL:g})")
    p.add_argument("--out", metavar="PATH", help="CSV destination (default stdout)")
    return p


def build_parser():
    top = _Parser(prog="mikusinski", parents=[_global_flags(None)],
                  description="Operational calculus: invert, verify, solve, series.")
    top.set_defaults(grid=_grid(_DEFAULT_GRID), tol=_DEFAULT_TOL, out=None)
    sub_flags = _global_flags(argparse.SUPPRESS)
    sub = top.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("invert", parents=[sub_flags],
                       help="realize an expression as a time function and emit CSV")
    p.add_argument("expr")
    p.add_argument("--order", type=int, default=_expr.DEFAULT_ORDER,
                   help="truncation order for h-series (raised to cover the grid)")

    p = sub.add_parser("verify", parents=[sub_flags],
                       help="check that two expressions denote the same element")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--order", type=int, default=_expr.DEFAULT_ORDER)

    p = sub.add_parser("solve", parents=[sub_flags], help="solver demonstrations")
    kinds = p.add_subparsers(dest="kind", metavar="KIND", parser_class=_Parser)
    kinds.required = True
    q = kinds.add_parser("ode", parents=[sub_flags],
                         help="sum_k a_k f^(k) = rhs with initial values")
    q.add_argument("--coeffs", required=True, help="a_0,...,a_n")
    q.add_argument("--init", default="", help="f(0),...,f^(n-1)(0)")
    q.add_argument("--rhs", default="0", help="right-hand side as an s-expression")
    q = kinds.add_parser("delay", parents=[sub_flags],
                         help="x(t) = forcing(t) + c x(t-1)")
    q.add_argument("--c", required=True, help="delay coefficient")
    q.add_argument("--forcing", required=True, help="forcing as an s-expression")
    q.add_argument("--horizon", type=float, default=None,
                   help="solution horizon (default: grid T)")

    p = sub.add_parser("series", parents=[sub_flags],
                       help="expand in l or h, apply operators, print coefficients")
    p.add_argument("expr", nargs="?", default=None)
    p.add_argument("--kind", choices=("l", "h"), default="l")
    p.add_argument("--order", type=int, default=_expr.DEFAULT_ORDER)
    p.add_argument("--bessel", type=str, default=None, metavar="ALPHA",
                   help="start from the series of J0(alpha t) instead of EXPR")
    p.add_argument("--op", action="append", default=[], metavar="OP",
                   help="operator to apply, e.g. T[2], tau[0.5], sigma[2], dds, D, Dp "
                        "(repeatable, applied left to right)")
    return top


# --- helpers -----------------------------------------------------------------------

def _scalar(text):
    x = _expr.evaluate(text.replace("−", "-"))
    c = x.as_constant() if isinstance(x, RatFun) else None
    if c is None:
        raise DomainError(f"{text!r} is not a number")
    return c


def _scalars(text):
    text = text.strip()
    if not text:
        return []
    return [_scalar(part) for part in text.split(",")]


def _rhs_function(text):
    x = _expr.evaluate(text)
    if not isinstance(x, RatFun):
        raise DomainError("right-hand side must be a rational function of s")
    const, f = _ep.realize(x)
    if abs(const) > 1e-12:
        raise DomainError("right-hand side must be a function (no constant part)")
    return f


def realize_fn(x, T, N):
    """Return ``(const, SampledFn)`` for a lowered element, or raise."""
    t = np.arange(N + 1) * (T / N)
    if isinstance(x, (RatFun, DelayElement)):
        g = _delay.realize(x)
        return g.const, _num.SampledFn(T, N, g(t))
    if isinstance(x, SeriesL):
        c, f = _series.realize(x)
        return c, _num.SampledFn(T, N, f(t))
    if isinstance(x, SeriesH):
        nz = [n for n, c in enumerate(x.coeffs) if c != 0]
        if nz and nz != [0]:
            raise DomainError("a non-trivial series in h is not a function")
        c = complex(x.coeffs[0]) if nz else 0j
        return c, _num.SampledFn(T, N, np.zeros(N + 1))
    raise DomainError("unknown element")


def times_l2(x):
    """Multiply a lowered element by l^2 (two integrations)."""
    if isinstance(x, SeriesH):
        # sum a_n h^n = {sum a_n max(0, t - n)} / l^2
        j = _delay.JumpSeries([c for c in x.coeffs],
                              [float(n) for n in range(x.order + 1)])
        return _delay.jump_realize(j)
    if isinstance(x, SeriesL):
        return SeriesL(np.concatenate([[0, 0], x.coeffs]))
    return DelayElement.of(x) * RatFun(1.0, [0, 0, 1.0])


def _as_function_pair(x, T, N):
    if isinstance(x, _delay.PiecewiseEP):
        t = np.arange(N + 1) * (T / N)
        return x.const, _num.SampledFn(T, N, x(t))
    return realize_fn(x, T, N)


def _fmt(z):
    z = complex(z)
    return f"{z.real:.12g}" if z.imag == 0 else f"{z.real:.12g}{z.imag:+.12g}i"


def describe_piecewise(g):
    lines = []
    if g.const != 0:
        lines.append(f"constant: {_fmt(g.const)}")
    for lam, f in g.pieces:
        lines.append(f"t > {lam:g}: {_ep.describe(f)}   [argument t - {lam:g}]"
                     if lam else f"t >= 0: {_ep.describe(f)}")
    return "\n".join(lines) if lines else "0"


def _emit_csv(fn, out):
    if out:
        _num.to_csv(fn, out)
        print(f"wrote {fn.N + 1} rows to {out}", file=sys.stderr)
    else:
        _num.to_csv(fn, sys.stdout)


# --- commands ----------------------------------------------------------------------

def cmd_invert(args):
    T, N = args.grid
    order = max(args.order, math.ceil(T) + 1)
    x = _expr.evaluate(args.expr, order)
    const, fn = realize_fn(x, T, N)
    if abs(const) > 1e-12:
        raise DomainError("element has a constant (impulse) part and is not a function")
    _emit_csv(fn, args.out)
    return EXIT_OK


def verify(lhs, rhs, T, N, order=_expr.DEFAULT_ORDER):
    """Return ``(deviation, method)`` for two expression texts."""
    a = _expr.evaluate(lhs, order)
    b = _expr.evaluate(rhs, order)
    d = _expr.distance(a, b)
    if d is not None:
        return d, "exact"
    try:
        ca, fa = _as_function_pair(a, T, N)
        cb, fb = _as_function_pair(b, T, N)
        how = "sampled"
    except DomainError:
        try:
            ca, fa = _as_function_pair(times_l2(a), T, N)
            cb, fb = _as_function_pair(times_l2(b), T, N)
        except DomainError as exc:
            raise DomainError(f"sides lie in different classes and cannot be "
                              f"realized for comparison: {exc}") from None
        how = "sampled after multiplying by l^2"
    knots = set()
    for x in (a, b):
        if isinstance(x, DelayElement):
            knots.update(x.delays)
        elif isinstance(x, SeriesH):
            knots.update(range(x.order + 1))
    dev = max(abs(ca - cb), _num.compare(fa, fb, sorted(knots)))
    return dev, how


def cmd_verify(args):
    T, N = args.grid
    dev, how = verify(args.lhs, args.rhs, T, N, args.order)
    ok = dev <= args.tol
    print(f"{'PASS' if ok else 'FAIL'}  max deviation {dev:.3e} ({how}, tol {args.tol:g})")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_solve(args):
    T, N = args.grid
    t = np.arange(N + 1) * (T / N)
    if args.kind == "ode":
        try:
            prob = _solver.OdeProblem(_scalars(args.coeffs), _scalars(args.init),
                                      _rhs_function(args.rhs))
        except DomainError as exc:
            raise _UsageError(f"solve ode: {exc}") from None
        f = _solver.solve_lode(prob)
        print(_ep.describe(f))
        fn = _num.SampledFn(T, N, f(t))
    else:
        horizon = T if args.horizon is None else args.horizon
        prob = _solver.DelayProblem(_scalar(args.c), _rhs_function(args.forcing), horizon)
        g = _solver.solve_delay_geom(prob)
        print(describe_piecewise(g))
        # the truncated series is exact only up to the horizon
        span = min(T, horizon)
        fn = _num.SampledFn(span, N, g(t * (span / T)))
    if args.out:
        _emit_csv(fn, args.out)
    return EXIT_OK


def _apply_series_op(text, a):
    node = _expr.parse(text + "(0)")
    if not isinstance(node, _expr.Apply):
        raise DomainError(f"not an operator: {text!r}")
    return _expr._Lower(a.order).apply(node.op, node.param, a)


def cmd_series(args):
    if args.bessel is not None:
        if args.kind != "l":
            raise DomainError("the Bessel series is a series in l")
        a = _series.bessel_j0(_scalar(args.bessel), args.order)
    elif args.expr is None:
        raise _UsageError("series: give EXPR or --bessel")
    else:
        x = _expr.evaluate(args.expr, args.order)
        if args.kind == "l":
            if isinstance(x, SeriesL):
                a = x
            elif isinstance(x, RatFun):
                a = _expr.ratfun_to_series_l(x, args.order)
            else:
                raise DomainError("element is not a power series in l")
        else:
            a = _expr.to_series_h(x, args.order)
    for op in args.op:
        a = _apply_series_op(op, a)
    print(f"n,re,im  ({a.var}-series, order {a.order})")
    for n, c in enumerate(a.coeffs):
        print(f"{n},{c.real:.17g},{c.imag:.17g}")
    return EXIT_OK


_COMMANDS = {"invert": cmd_invert, "verify": cmd_verify,
             "solve": cmd_solve, "series": cmd_series}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"syntax error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
