import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mikusinski.errors import DomainError
from mikusinski.poly import (L_OP, S_OP, PfTerm, Poly, RatFun, dds,
                             partial_fractions, poly_arith, poly_roots,
                             recombine, substitute)

from randgen import rand_poles, rand_proper


def close(a, b, tol=1e-12):
    return np.allclose(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex),
                       atol=tol, rtol=0)


# --- polynomial arithmetic -----------------------------------------------------

def test_difference_of_squares():
    p = poly_arith(Poly([1, 1]), Poly([-1, 1]), "mul")
    assert close(p.coeffs, [-1, 0, 1])


def test_divrem_simple():
    q, r = poly_arith(Poly([1, 0, 1]), Poly([0, 1]), "divrem")
    assert close(q.coeffs, [0, 1])
    assert close(r.coeffs, [1])


def test_divrem_by_zero():
    with pytest.raises(DomainError):
        Poly([1, 2]).divrem(Poly())


def test_add_sub_cancel_to_zero():
    p = Poly([1, 2, 3])
    assert (p - p).is_zero
    assert (p - p).degree == -1
    assert poly_arith(p, p, "add").degree == 2


def test_product_matches_pointwise():
    rng = np.random.default_rng(11)
    a = Poly(rng.normal(size=7) + 1j * rng.normal(size=7))
    b = Poly(rng.normal(size=7) + 1j * rng.normal(size=7))
    ab = a * b
    for x in rng.normal(size=10) + 1j * rng.normal(size=10):
        assert abs(ab(x) - a(x) * b(x)) <= 1e-12 * max(1, abs(a(x) * b(x)))


def test_divrem_reconstructs():
    rng = np.random.default_rng(12)
    for _ in range(20):
        a = Poly(rng.normal(size=8))
        b = Poly(rng.normal(size=int(rng.integers(2, 6))))
        q, r = a.divrem(b)
        assert r.degree < b.degree
        scale = max(1.0, (q * b).norm())
        assert (q * b + r - a).norm() <= 1e-13 * scale


def test_shift_and_rescale():
    p = Poly([1, 2, 3])  # 1 + 2s + 3s^2
    # p(s + 1) = 6 + 8s + 3s^2
    assert close(p.shifted(1).coeffs, [6, 8, 3])
    # p(s / 2) = 1 + s + 0.75 s^2
    assert close(p.rescaled(2).coeffs, [1, 1, 0.75])


# --- roots -----------------------------------------------------------------------

def test_roots_of_s2_plus_1():
    r = sorted(poly_roots(Poly([1, 0, 1])), key=lambda z: z.imag)
    assert close(r, [-1j, 1j])


def test_double_root():
    r = poly_roots(Poly([1, -2, 1]))
    assert len(r) == 2 and close(r, [1, 1], 1e-12)


def test_expanded_sixfold_root():
    p = Poly(np.poly([1.0] * 6)[::-1])
    r = poly_roots(p)
    assert len(r) == 6 and close(r, [1] * 6, 1e-12)


def test_roots_from_known_roots():
    rng = np.random.default_rng(5)
    for _ in range(20):
        want = rand_poles(rng, 5, sep=0.05, re=(-2, 2), im=2)
        # expand numerically, dropping the factor bookkeeping
        p = Poly(Poly.from_roots(want).coeffs)
        got = poly_roots(p)
        for z in want:
            assert min(abs(z - g) for g in got) <= 1e-8


def test_root_residuals():
    rng = np.random.default_rng(6)
    for _ in range(30):
        deg = int(rng.integers(1, 9))
        p = Poly(rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1))
        roots = poly_roots(p)
        assert len(roots) == deg
        scale = np.max(np.abs(p.coeffs))
        for z in roots:
            assert abs(p(z)) <= 1e-9 * scale


def test_roots_need_degree_one():
    with pytest.raises(DomainError):
        poly_roots(Poly([3.0]))


def test_roots_survive_products_and_substitution():
    p = Poly.from_roots([1, 1, 2j]) * Poly.from_roots([1])
    q = p.shifted(0.5)  # roots move by -0.5
    r = poly_roots(q)
    assert any(abs(z - (-0.5 + 2j)) < 1e-14 for z in r)
    assert sum(abs(z - 0.5) < 1e-14 for z in r) == 3


def test_zero_roots_stripped_exactly():
    r = poly_roots(Poly([0, 0, 1, 1]))
    assert sum(z == 0 for z in r) == 2
    assert any(abs(z + 1) < 1e-14 for z in r)


# --- rational functions -------------------------------------------------------------

def test_monic_normalization():
    r = RatFun(Poly([2]), Poly([4, 2]))
    assert r.den.lead == 1
    assert close(r.num.coeffs, [1])


def test_zero_denominator():
    with pytest.raises(DomainError):
        RatFun(1.0, 0.0)


def test_non_finite_rejected():
    with pytest.raises(DomainError):
        Poly([1, float("nan")])


def test_field_operations():
    x = (S_OP + 1) / (S_OP - 2)
    assert abs((x * (1 / x))(0.3) - 1) < 1e-14
    assert abs((L_OP * S_OP)(1.7) - 1) < 1e-14
    assert abs((x ** -2)(0.5) - x(0.5) ** -2) < 1e-12


# --- partial fractions --------------------------------------------------------------

def test_pf_sine_kernel():
    quot, terms = partial_fractions(RatFun(1, Poly([1, 0, 1])))
    assert quot.is_zero
    d = {round(t.pole.imag): t for t in terms}
    assert set(d) == {1, -1}
    assert abs(d[1].coeff - 1 / 2j) < 1e-14 and d[1].order == 1
    assert abs(d[-1].coeff + 1 / 2j) < 1e-14


def test_pf_double_pole_at_zero():
    quot, terms = partial_fractions(RatFun(1, Poly([0, 0, 1])))
    assert quot.is_zero
    assert len(terms) == 1
    pole, order, coeff = terms[0]
    assert pole == 0 and order == 2 and abs(coeff - 1) < 1e-15


def test_pf_shifted_cosine():
    # (s - 1) / ((s - 1)^2 + 4)
    r = RatFun(Poly([-1, 1]), Poly([5, -2, 1]))
    _, terms = partial_fractions(r)
    assert len(terms) == 2
    for t in terms:
        assert t.order == 1
        assert abs(abs(t.pole - 1) - 2) < 1e-14
        assert abs(t.coeff - 0.5) < 1e-13


def test_pf_improper_has_polynomial_part():
    r = RatFun(Poly([1, 0, 0, 1]), Poly([1, 1]))  # (s^3 + 1)/(s + 1) = s^2 - s + 1
    quot, terms = partial_fractions(r)
    assert close(quot.coeffs, [1, -1, 1], 1e-12)
    assert all(abs(t.coeff) < 1e-12 for t in terms)


def test_pf_term_validation():
    with pytest.raises(DomainError):
        PfTerm(0, 0, 1)


def test_pf_recombination_random():
    rng = np.random.default_rng(21)
    for _ in range(200):
        m = int(rng.integers(1, 6))
        poles = rand_poles(rng, m, sep=0.1, re=(-2, 2), im=2)
        poles = [z if abs(z) <= 2 else z / abs(z) * 2 for z in poles]
        den = Poly.from_roots(poles)
        k = int(rng.integers(0, m))
        num = Poly(rng.normal(size=k + 1) + 1j * rng.normal(size=k + 1))
        r = RatFun(num, den)
        quot, terms = partial_fractions(r)
        back = recombine(quot, terms)
        for x in rng.uniform(-3, 3, 20) + 1j * rng.uniform(-3, 3, 20):
            assert abs(back(x) - r(x)) <= 1e-7 * max(1.0, abs(r(x)))


def test_pf_repeated_poles():
    r = RatFun(Poly([1, 2, 3]), Poly.from_roots([1, 1, 1, -2]))
    quot, terms = partial_fractions(r)
    orders = sorted(t.order for t in terms if abs(t.pole - 1) < 1e-12)
    assert orders == [1, 2, 3]
    back = recombine(quot, terms)
    for x in (0.3, 2.5 + 1j, -1j):
        assert abs(back(x) - r(x)) < 1e-12


# --- substitution and d/ds --------------------------------------------------------------

def test_shift_of_integrator():
    r = substitute(L_OP, shift=2.0)
    assert r.distance(RatFun(1, Poly([-2, 1]))) < 1e-15


def test_scale_of_s():
    r = substitute(S_OP, scale=2.0)
    assert r.distance(S_OP * 0.5) < 1e-15


def test_shift_zero_identity():
    x = RatFun(Poly([1, 2]), Poly([3, 1, 1]))
    assert substitute(x, shift=0).distance(x) == 0


def test_scale_must_be_positive():
    with pytest.raises(DomainError):
        substitute(S_OP, scale=-1)
    with pytest.raises(DomainError):
        substitute(S_OP)


def test_dds_basic():
    assert dds(S_OP).distance(RatFun(1.0)) < 1e-15
    assert dds(L_OP).distance(-(L_OP ** 2)) < 1e-15


def test_dds_finite_difference():
    rng = np.random.default_rng(31)
    eps = 1e-6
    for _ in range(20):
        r = rand_proper(rng, 4)
        dr = dds(r)
        for x in rng.uniform(0.5, 2, 5) + 1j * rng.uniform(-1, 1, 5):
            fd = (r(x + eps) - r(x - eps)) / (2 * eps)
            assert abs(dr(x) - fd) <= 1e-6 * max(1.0, abs(fd))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000))
def test_leibniz(seed):
    rng = np.random.default_rng(seed)
    a, b = rand_proper(rng, 3), rand_proper(rng, 3)
    lhs, rhs = dds(a * b), dds(a) * b + a * dds(b)
    for x in rng.uniform(2.5, 4, 5) + 1j * rng.uniform(-1, 1, 5):
        assert abs(lhs(x) - rhs(x)) <= 1e-8 * max(1.0, abs(rhs(x)))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["shift", "scale"]))
def test_substitution_homomorphism(seed, kind):
    rng = np.random.default_rng(seed)
    a, b = rand_proper(rng, 3), rand_proper(rng, 3)
    if kind == "shift":
        kw = {"shift": complex(*rng.uniform(-1, 1, 2))}
    else:
        kw = {"scale": float(rng.uniform(0.3, 3))}
    for lhs, rhs in ((substitute(a * b, **kw), substitute(a, **kw) * substitute(b, **kw)),
                     (substitute(a + b, **kw), substitute(a, **kw) + substitute(b, **kw))):
        for x in rng.uniform(7, 9, 5) + 1j * rng.uniform(-1, 1, 5):
            assert abs(lhs(x) - rhs(x)) <= 1e-9 * max(1.0, abs(rhs(x)))


def test_unit_root_exactness():
    # roots of unity from a coefficient-only polynomial
    r = poly_roots(Poly([-1, 0, 0, 0, 1]))
    want = [cmath.exp(2j * cmath.pi * k / 4) for k in range(4)]
    for z in want:
        assert min(abs(z - g) for g in r) < 1e-14
