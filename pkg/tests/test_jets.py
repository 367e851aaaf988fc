import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from galmann import jets
from galmann.jets import DomainError, Jet3, Taylor, reverse

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=50)
jet3s = st.builds(Jet3, fractions, fractions, fractions, fractions)


def test_variable_jet():
    assert Jet3.variable(Fraction(3, 2)).as_tuple() == (Fraction(3, 2), 1, 0, 0)
    assert Taylor.variable(2.0, 3).derivatives() == (2.0, 1, 0, 0)


@given(jet3s, jet3s)
def test_product_obeys_leibniz_exactly(f, g):
    p = f * g
    assert p.v0 == f.v0 * g.v0
    assert p.v1 == f.v1 * g.v0 + f.v0 * g.v1
    assert p.v2 == f.v2 * g.v0 + 2 * f.v1 * g.v1 + f.v0 * g.v2
    assert p.v3 == f.v3 * g.v0 + 3 * f.v2 * g.v1 + 3 * f.v1 * g.v2 + f.v0 * g.v3


@given(jet3s, jet3s)
def test_sum_and_difference_are_componentwise(f, g):
    assert (f + g).as_tuple() == tuple(a + b for a, b in zip(f.as_tuple(), g.as_tuple()))
    assert (f - g).as_tuple() == tuple(a - b for a, b in zip(f.as_tuple(), g.as_tuple()))


@given(jet3s, jet3s)
def test_quotient_times_divisor_is_identity(f, g):
    if g.v0 == 0:
        with pytest.raises(DomainError):
            f / g
        return
    assert ((f / g) * g).as_tuple() == f.as_tuple()


t = sp.Symbol("t")


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=4),
       st.lists(st.integers(-5, 5), min_size=1, max_size=4),
       st.fractions(min_value=-3, max_value=3, max_denominator=7))
def test_composition_matches_faa_di_bruno_on_polynomials(outer, inner, t0):
    # exact oracle: expand p(q(t)) symbolically and differentiate
    p = sum(c * t**k for k, c in enumerate(outer))
    q = sum(c * t**k for k, c in enumerate(inner))
    composed = sp.expand(p.subs(t, q))
    want = tuple(sp.Rational(sp.diff(composed, t, k).subs(t, sp.Rational(t0)))
                 for k in range(4))

    def horner(coeffs, x):
        acc = Jet3(Fraction(0))
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    inner_jet = horner(inner, Jet3.variable(t0))
    got = horner(outer, inner_jet)
    assert tuple(sp.Rational(v) for v in got.as_tuple()) == want


def test_faa_di_bruno_third_order_formula():
    # h = f(g): h''' = f''' g'^3 + 3 f'' g' g'' + f' g'''
    g = Jet3(Fraction(1, 3), Fraction(2), Fraction(-1, 2), Fraction(5))
    cube = g ** 3  # f(u) = u^3: f' = 3u^2, f'' = 6u, f''' = 6
    u = g.v0
    f1, f2, f3 = 3 * u**2, 6 * u, 6
    assert cube.v1 == f1 * g.v1
    assert cube.v2 == f2 * g.v1**2 + f1 * g.v2
    assert cube.v3 == f3 * g.v1**3 + 3 * f2 * g.v1 * g.v2 + f1 * g.v3


@pytest.mark.parametrize("fn, sym", [
    (jets.sin, sp.sin), (jets.cos, sp.cos), (jets.tan, sp.tan), (jets.exp, sp.exp),
    (jets.log, sp.log), (jets.sqrt, sp.sqrt), (jets.sinh, sp.sinh),
    (jets.cosh, sp.cosh), (jets.tanh, sp.tanh),
])
def test_elementary_series_against_symbolic_derivatives(fn, sym):
    x0 = 0.7
    inner = 0.3 + t + t**2 / 3
    inner_jet = Taylor.variable(x0, 5) * Taylor.variable(x0, 5) / 3 + Taylor.variable(x0, 5) + 0.3
    got = fn(inner_jet).derivatives()
    expr = sym(inner)
    want = [float(sp.diff(expr, t, k).subs(t, x0)) for k in range(6)]
    np.testing.assert_allclose(got, want, rtol=1e-12, atol=1e-12)


def test_real_power_series():
    got = (Taylor.variable(2.0, 4) ** 2.5).derivatives()
    want = [float(sp.diff(t ** sp.Rational(5, 2), t, k).subs(t, 2)) for k in range(5)]
    np.testing.assert_allclose(got, want, rtol=1e-13)


def test_integer_power_at_zero_is_defined():
    assert (Taylor.variable(0.0, 3) ** 2).derivatives() == (0.0, 0.0, 2.0, 0.0)
    with pytest.raises(DomainError):
        Taylor.variable(0.0, 3) ** -1
    with pytest.raises(DomainError):
        Taylor.variable(0.0, 3) ** 0.5


@pytest.mark.parametrize("fn, x0", [
    (jets.log, 0.0), (jets.log, -1.0), (jets.sqrt, -1.0), (jets.sqrt, 0.0), (jets.fabs, 0.0),
])
def test_domain_errors(fn, x0):
    with pytest.raises(DomainError):
        fn(Taylor.variable(x0, 3))


def test_domain_errors_on_arrays_flag_any_element():
    with pytest.raises(DomainError):
        jets.log(Taylor.variable(np.array([1.0, 2.0, -0.5]), 3))


def test_reverse_inverts_exp():
    # X(t) = exp(t) - 1 around t0 has inverse t = log(1 + X)
    t0 = 0.4
    X = jets.exp(Taylor.variable(t0, 5)) - 1
    inv = reverse(X)
    s0 = math.exp(t0) - 1
    want = [0.0] + [float(sp.diff(sp.log(1 + t), t, k).subs(t, s0)) / math.factorial(k)
                    for k in range(1, 6)]
    np.testing.assert_allclose(inv.c, want, rtol=1e-13, atol=1e-15)


def test_deriv_and_integrate_are_inverse():
    s = Taylor((1.0, 2.0, 3.0, 4.0))
    assert s.deriv().integrate(1.0).c == s.c
