import math

import numpy as np
import pytest

from mikusinski import delay as dl
from mikusinski import exppoly as ep
from mikusinski import numeric as nm
from mikusinski.delay import JumpSeries
from mikusinski.errors import DomainError, RangeError
from mikusinski.exppoly import ExpPoly
from mikusinski.numeric import FracMonomial, SampledFn
from mikusinski.poly import L_OP
from mikusinski.special import erf, gamma, j0, special, zeta

from randgen import rand_exppoly

ONES = lambda t: np.ones_like(t)  # noqa: E731


# --- sampling ------------------------------------------------------------------

def test_sample_constant_and_exp():
    a = nm.sample(ONES, 3, 6)
    assert np.all(a.values == 1)
    b = nm.sample(np.exp, 2, 4)
    assert abs(b.values[2] - math.e) < 1e-15


def test_sample_of_l2_is_identity():
    _, f = ep.realize(L_OP ** 2)
    a = nm.sample(f, 4, 8)
    assert np.allclose(a.values, a.t, atol=1e-15)


def test_sampled_fn_validation():
    with pytest.raises(DomainError):
        SampledFn(1, 1, [0, 0])
    with pytest.raises(DomainError):
        SampledFn(1, 2, [0, 0])
    with pytest.raises(DomainError):
        SampledFn(1, 2, [0, np.nan, 0])
    with pytest.raises(DomainError):
        nm.sample(ONES, 0, 10)


# --- convolution -------------------------------------------------------------------

def test_conv_ones_is_ramp():
    c = nm.conv_trapezoid(nm.sample(ONES, 5, 2000), nm.sample(ONES, 5, 2000))
    assert np.max(np.abs(c.values - c.t)) < 1e-6


def test_conv_one_exp():
    # error ~ dt^2/12 (e^T - 1); N=4000 on [0, 5] keeps it near 2e-5
    c = nm.conv_trapezoid(nm.sample(ONES, 5, 4000), nm.sample(np.exp, 5, 4000))
    assert np.max(np.abs(c.values - (np.exp(c.t) - 1))) < 5e-5


def test_conv_with_zero():
    z = nm.sample(lambda t: 0 * t, 5, 100)
    c = nm.conv_trapezoid(nm.sample(np.exp, 5, 100), z)
    assert np.all(c.values == 0)


def test_conv_grid_mismatch():
    with pytest.raises(DomainError):
        nm.conv_trapezoid(nm.sample(ONES, 5, 100), nm.sample(ONES, 5, 200))


def test_conv_refinement_ramp():
    exact = lambda t: t * t / 2  # noqa: E731  {1} * {t}
    errs = []
    for N in (2000, 4000):
        c = nm.conv_trapezoid(nm.sample(ONES, 5, N), nm.sample(lambda t: t, 5, N))
        errs.append(np.max(np.abs(c.values - exact(c.t))))
    # trapezoid is exact for a linear integrand
    assert max(errs) < 1e-11


def test_conv_refinement_order():
    rng = np.random.default_rng(11)
    for _ in range(10):
        a, b = rand_exppoly(rng), rand_exppoly(rng)
        errs = []
        for N in (500, 1000):
            exact = nm.sample(ep.convolve(a, b), 4, N)
            errs.append(nm.compare(exact, nm.conv_trapezoid(nm.sample(a, 4, N), nm.sample(b, 4, N))))
        assert 3.5 <= errs[0] / errs[1] <= 4.5


def test_conv_matches_direct_sum():
    rng = np.random.default_rng(0)
    a = SampledFn(1, 6, rng.normal(size=7))
    b = SampledFn(1, 6, rng.normal(size=7))
    c = nm.conv_trapezoid(a, b)
    d = 1 / 6
    for i in range(7):
        g = [a.values[i - j] * b.values[j] for j in range(i + 1)]
        want = d * (sum(g) - 0.5 * (g[0] + g[-1])) if i else 0
        assert abs(c.values[i] - want) < 1e-14


# --- operators ---------------------------------------------------------------------

def test_mul_exp_zero_identity():
    a = nm.sample(np.sin, 3, 30)
    assert np.all(nm.num_op(a, "mul_exp", 0).values == a.values)


def test_tau_on_one():
    a = nm.tau(nm.sample(ONES, 4, 40), 2.5)
    assert np.allclose(a.values, 2.5)
    assert a.T == pytest.approx(1.6) and a.N == 16


def test_tau_q_below_one_keeps_horizon():
    a = nm.tau(nm.sample(lambda t: t, 4, 400), 0.5)
    assert a.N == 400
    assert np.allclose(a.values, 0.25 * a.t, atol=1e-14)


def test_tau_rejects_nonpositive():
    with pytest.raises(DomainError):
        nm.tau(nm.sample(ONES, 1, 10), 0)


def test_shift_of_ramp():
    a = nm.shift(nm.sample(lambda t: t, 5, 500), 1.0)
    assert np.allclose(a.values, np.maximum(0, a.t - 1), atol=1e-12)
    b = nm.shift(nm.sample(lambda t: t * t, 5, 500), 0.503)
    off = np.abs(b.t - 0.503) > b.dt
    assert np.max(np.abs(b.values - np.maximum(0, b.t - 0.503) ** 2)[off]) < 1e-4


def test_shift_negative():
    with pytest.raises(DomainError):
        nm.shift(nm.sample(ONES, 1, 10), -0.5)


def test_num_op_unknown():
    with pytest.raises(DomainError):
        nm.num_op(nm.sample(ONES, 1, 10), "bogus")


def test_numeric_operators_match_exact():
    rng = np.random.default_rng(1)
    T, N = 4.0, 800
    for _ in range(20):
        f = rand_exppoly(rng)
        a = complex(*rng.uniform(-1, 1, 2))
        q = float(rng.integers(2, 4))
        s = nm.sample(f, T, N)
        assert nm.compare(nm.sample(ep.exp_shift(a, f), T, N), nm.mul_exp(s, a)) < 1e-9
        assert nm.compare(nm.sample(ep.dds(f), T, N), nm.mul_negt(s)) < 1e-9
        scaled = nm.tau(s, q)
        assert nm.compare(nm.sample(ep.qscale(q, f), scaled.T, scaled.N), scaled) < 1e-9


def test_tau_off_grid_is_second_order():
    f = ExpPoly([(-0.5 + 1j, [1.0]), (-0.5 - 1j, [1.0])])
    errs = []
    for N in (1000, 2000):
        s = nm.tau(nm.sample(f, 4, N), 0.7)
        errs.append(nm.compare(nm.sample(ep.qscale(0.7, f), 4, N), s))
    assert errs[0] < 1e-5 and 3.5 < errs[0] / errs[1] < 4.5


# --- compare and CSV ---------------------------------------------------------------

def test_compare_self_and_l2():
    a = nm.sample(np.cos, 3, 30)
    assert nm.compare(a, a) == 0
    _, f = ep.realize(L_OP ** 2)
    assert nm.compare(nm.sample(lambda t: t, 3, 30), nm.sample(f, 3, 30)) <= 1e-12


def test_compare_refinement_of_ramp():
    for N, tol in ((2000, 1e-6), (4000, 2.5e-7)):
        c = nm.conv_trapezoid(nm.sample(ONES, 5, N), nm.sample(ONES, 5, N))
        assert nm.compare(c, nm.sample(lambda t: t, 5, N)) <= tol


def test_compare_excludes_knots():
    a = nm.sample(lambda t: (t > 1).astype(float), 2, 20)
    b = nm.sample(lambda t: (t >= 1).astype(float), 2, 20)
    assert nm.compare(a, b) == 1
    assert nm.compare(a, b, exclude_knots=[1.0]) == 0


def test_compare_intersects_horizons():
    a = nm.sample(np.exp, 4, 40)
    b = nm.sample(np.exp, 2, 20)
    assert nm.compare(a, b) == 0


def test_compare_errors():
    with pytest.raises(DomainError):
        nm.compare(nm.sample(ONES, 1, 10), nm.sample(ONES, 1, 20))
    with pytest.raises(DomainError):
        nm.compare(nm.sample(ONES, 0.2, 2), nm.sample(ONES, 0.2, 2), exclude_knots=[0.1])


def test_csv_format(tmp_path):
    a = SampledFn(1, 2, [0, 1 / 3, 1j])
    text = nm.to_csv(a)
    lines = text.splitlines()
    assert lines[0] == "t,re,im"
    assert lines[2] == "0.5,0.33333333333333331,0"
    assert lines[3] == "1,0,1"
    path = tmp_path / "x.csv"
    nm.to_csv(a, str(path))
    t, v = nm.read_csv(str(path))
    assert np.all(t == a.t) and np.all(v == a.values)


# --- fractional powers --------------------------------------------------------------

def test_frac_power_examples():
    assert np.allclose(nm.frac_power_fn(0, 1, 2, 10).values, 1)
    a = nm.frac_power_fn(0, 2, 2, 10)
    assert np.allclose(a.values, a.t, atol=1e-15)
    b = nm.frac_power_fn(0, 0.5, 2, 10)
    assert abs(b.values[5] - 1 / math.sqrt(math.pi)) < 1e-14
    assert b.values[0] == 0
    with pytest.raises(DomainError):
        nm.frac_power_fn(0, 0, 2, 10)


def test_beta_identity():
    rng = np.random.default_rng(2)
    for lam, mu in rng.uniform(0.1, 4, (20, 2)):
        got = FracMonomial.frac_power(0, lam).convolve(FracMonomial.frac_power(0, mu))
        want = FracMonomial.frac_power(0, lam + mu)
        assert abs(got.coeff - want.coeff) <= 1e-10 * abs(want.coeff)
        assert abs(got.power - want.power) < 1e-14


def test_frac_monomial_validation():
    with pytest.raises(DomainError):
        FracMonomial(1, -1)
    with pytest.raises(DomainError):
        FracMonomial(1, 0, 1).convolve(FracMonomial(1, 0, 2))


def test_semigroup_quadrature():
    rng = np.random.default_rng(3)
    pairs = list(rng.uniform(1, 3, (5, 2))) + [(1.0, 1.0), (1.02, 1.0), (1.05, 1.05)]
    for lam, mu in pairs:
        alpha = complex(rng.uniform(-1, 0.3), rng.uniform(-1, 1))
        got = nm.conv_frac_powers(alpha, lam, mu, 5, 1000)
        assert nm.compare(got, nm.frac_power_fn(alpha, lam + mu, 5, 1000)) < 1e-4


def test_plain_trapezoid_is_first_order_near_one():
    # the stored 0 at t=0 next to a sample of ~1 acts like a jump
    a = nm.frac_power_fn(0, 1.05, 5, 1000)
    plain = nm.conv_trapezoid(a, a)
    want = nm.frac_power_fn(0, 2.1, 5, 1000)
    fixed = nm.conv_frac_powers(0, 1.05, 1.05, 5, 1000)
    assert nm.compare(plain, want) > 1e-3 > 1e-4 > nm.compare(fixed, want)


def test_conv_frac_power_against_beta():
    # (s-a)^(-1/2) applied to (s-a)^(-3/2) gives (s-a)^(-2) = {t e^(at)};
    # both singular ends share the first few cells at small t, so the
    # max error is first order there
    a = -0.3
    errs = []
    for N in (1000, 4000):
        got = nm.conv_frac_power(a, 0.5, nm.frac_power_fn(a, 1.5, 4, N))
        errs.append(nm.compare(got, nm.sample(lambda t: t * np.exp(a * t), 4, N)))
    assert errs[0] < 1e-3
    assert 3.5 < errs[0] / errs[1] < 4.5


def test_conv_frac_power_smooth_partner_is_exact_order():
    # against {1} and {t} the rule integrates exactly
    for lam in (0.3, 0.5, 0.8):
        got = nm.conv_frac_power(0, lam, nm.sample(ONES, 3, 300))
        assert nm.compare(got, nm.frac_power_fn(0, lam + 1, 3, 300)) < 1e-13


def test_erf_identity():
    T, N = 5.0, 2000
    got = nm.conv_frac_power(-1.0, 0.5, nm.sample(ONES, T, N))
    want = nm.sample(lambda t: np.array([erf(math.sqrt(x)) for x in t]), T, N)
    keep = got.t >= 0.1
    assert np.max(np.abs(got.values - want.values)[keep]) < 1e-3


# --- special functions --------------------------------------------------------------

def test_gamma_values():
    assert abs(gamma(0.5) - math.sqrt(math.pi)) < 1e-14
    for x in np.linspace(0.05, 30, 300):
        assert abs(gamma(x) - math.gamma(x)) <= 1e-12 * math.gamma(x)
    with pytest.raises(DomainError):
        gamma(-2)
    with pytest.raises(DomainError):
        gamma(0)


def test_erf_values():
    assert erf(0) == 0
    for x in np.linspace(-5, 5, 101):
        assert abs(erf(x) - math.erf(x)) < 1e-13


def test_j0_values():
    assert j0(0) == 1
    # zeros of J0 and a tabulated value
    assert abs(j0(2.404825557695773)) < 1e-14
    assert abs(j0(1.0) - 0.7651976865579666) < 1e-15
    with pytest.raises(RangeError):
        j0(12.5)


ZETA = [
    (-3.7, 0.002599254987149322), (-2.5, 0.008516928777850331),
    (-1.5, -0.025485201889833036), (-0.8, -0.12198707766977113),
    (-0.25, -0.3204512642285773), (0.3, -0.904559257253984),
    (0.5, -1.4603545088095868), (1.5, 2.612375348685488),
    (2.5, 1.341487257250917), (7.0, 1.008349277381923),
]


@pytest.mark.parametrize("s,want", ZETA)
def test_zeta_values(s, want):
    assert abs(zeta(s) - want) <= 1e-13 * max(1, abs(want))


def test_zeta_integers_and_errors():
    assert zeta(0) == -0.5
    assert abs(zeta(-1) + 1 / 12) < 1e-15
    assert abs(zeta(2) - math.pi ** 2 / 6) < 1e-15
    with pytest.raises(DomainError):
        zeta(1)
    assert abs(zeta(-3) - 1 / 120) < 1e-16
    assert abs(zeta(-4)) < 1e-16


def test_special_dispatch():
    assert special("gamma", 5) == pytest.approx(24)
    with pytest.raises(DomainError):
        special("digamma", 2)


def test_jump_series_against_shift_accumulate():
    rng = np.random.default_rng(4)
    coeffs = rng.normal(size=10)
    delays = np.sort(rng.uniform(0, 4.5, 10))
    g = dl.jump_realize(JumpSeries(coeffs, delays))
    T, N = 5.0, 1000
    ramp = nm.sample(lambda t: t, T, N)
    acc = nm.SampledFn(T, N, np.zeros(N + 1))
    for a, b in zip(coeffs, delays):
        acc = acc + nm.shift(ramp, b) * a
    got = nm.sample(g, T, N)
    assert nm.compare(got, acc, exclude_knots=delays) < 1e-9
