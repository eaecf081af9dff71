import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from src.core.specfun import (
    BellIndex, BesselDomainError, Order, PolyEval, as_order, bell_partial, bessel_j, bessel_y,
    bessel_zeros, central_difference, d_operator_fd, d_power_j, d_power_y, faa_di_bruno_generic,
    faa_di_bruno_special, gegenbauer_normalized, gegenbauer_rodrigues, normalized_j, normalized_y,
)

X = np.concatenate([np.linspace(0.05, 11.9, 40), np.linspace(12.1, 40.0, 40)])


@pytest.mark.parametrize("alpha", [0, 1, 2, 3, 5])
def test_bessel_j_matches_scipy(alpha):
    np.testing.assert_allclose(bessel_j(alpha, X), special.jv(alpha, X), rtol=1e-9, atol=1e-11)


@pytest.mark.parametrize("alpha", [0, 1, 2, 3])
def test_bessel_y_matches_scipy(alpha):
    np.testing.assert_allclose(bessel_y(alpha, X), special.yv(alpha, X), rtol=1e-9, atol=1e-11)


def test_normalized_j_at_zero_is_one():
    for alpha in range(5):
        assert normalized_j(alpha, 0.0) == 1.0


def test_normalized_functions_match_definition():
    x = np.linspace(0.3, 20.0, 25)
    for alpha in (0, 1, 3):
        factor = 2.0 ** alpha * math.factorial(alpha) / x ** alpha
        np.testing.assert_allclose(normalized_j(alpha, x), factor * special.jv(alpha, x),
                                   rtol=1e-9, atol=1e-11)
        np.testing.assert_allclose(normalized_y(alpha, x), factor * special.yv(alpha, x),
                                   rtol=1e-9, atol=1e-11)


def test_scalar_input_returns_float():
    assert isinstance(bessel_j(0, 1.0), float)
    assert isinstance(normalized_y(1, 2.0), float)


@pytest.mark.parametrize("alpha", [0, 1, 2, 4])
def test_wronskian(alpha):
    x = np.linspace(0.5, 30.0, 50)
    w = bessel_j(alpha + 1, x) * bessel_y(alpha, x) - bessel_j(alpha, x) * bessel_y(alpha + 1, x)
    np.testing.assert_allclose(w, 2.0 / (np.pi * x), rtol=1e-9)


@pytest.mark.parametrize("alpha", [0, 1, 2, 3, 4])
@pytest.mark.parametrize("func", [normalized_j, normalized_y])
def test_normalized_bessel_ode(alpha, func):
    # y'' + (2α+1)/x y' + y = 0
    f = lambda t: func(alpha, t)
    for x in (0.5, 1.3, 4.7, 9.9, 15.0, 22.2, 30.0):
        step = 2e-3 * x
        d1 = central_difference(f, x, 1, step)
        d2 = central_difference(f, x, 2, step)
        residual = d2 + (2 * alpha + 1) / x * d1 + f(x)
        # y_α は原点付近で x^{-2α} の大きさになるので各項の大きさで割る
        assert abs(residual) / max(1.0, abs(f(x)), abs(d2)) < 1e-6


def test_domain_errors():
    with pytest.raises(BesselDomainError):
        bessel_j(0, -1.0)
    with pytest.raises(BesselDomainError):
        bessel_y(0, 0.0)
    with pytest.raises(BesselDomainError):
        normalized_j(1, np.array([1.0, np.nan]))
    with pytest.raises(ValueError):
        bessel_j(-1, 1.0)
    with pytest.raises(ValueError):
        as_order(1.5)


def test_order_helpers():
    assert Order.from_dimension(6).alpha == 2
    assert Order(1).shifted(2) == Order(3)
    assert as_order(Order(4)) == 4
    with pytest.raises(ValueError):
        Order.from_dimension(3)


@pytest.mark.parametrize("alpha", [0, 1, 2, 5])
def test_bessel_zeros_match_scipy(alpha):
    zeros = bessel_zeros(alpha, 10)
    np.testing.assert_allclose(zeros, special.jn_zeros(alpha, 10), rtol=1e-12)
    assert all(b > a for a, b in zip(zeros, zeros[1:]))


def test_bessel_zeros_vanish():
    zeros = np.array(bessel_zeros(1, 8))
    assert np.max(np.abs(special.jv(1, zeros))) < 1e-13


def test_bessel_zeros_count_validation():
    with pytest.raises(ValueError):
        bessel_zeros(0, 0)


@pytest.mark.parametrize("alpha, k", [(0, 1), (0, 3), (1, 2), (1, 3)])
def test_d_power_matches_finite_difference(alpha, k):
    for x in (1.5, 2.5, 6.0):
        expected_j = d_operator_fd(lambda t: normalized_j(alpha, t), x, k, 2e-2)
        expected_y = d_operator_fd(lambda t: normalized_y(alpha, t), x, k, 2e-2)
        assert d_power_j(alpha, k, x) == pytest.approx(expected_j, rel=1e-4, abs=1e-8)
        assert d_power_y(alpha, k, x) == pytest.approx(expected_y, rel=1e-4, abs=1e-8)


def test_d_power_zero_is_identity():
    assert d_power_j(2, 0, 1.7) == pytest.approx(normalized_j(2, 1.7))


def test_d_power_negative_raises():
    with pytest.raises(ValueError):
        d_power_j(1, -1, 1.0)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 3.0])
@pytest.mark.parametrize("m", [0, 1, 2, 5])
def test_gegenbauer_matches_scipy(alpha, m):
    x = np.linspace(-1, 1, 21)
    expected = special.eval_gegenbauer(m, alpha, x) / special.eval_gegenbauer(m, alpha, 1.0)
    np.testing.assert_allclose(gegenbauer_normalized(alpha, m, x), expected, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("m", [0, 1, 3, 6])
def test_gegenbauer_chebyshev_limit(m):
    x = np.linspace(-1, 1, 17)
    np.testing.assert_allclose(gegenbauer_normalized(0, m, x), special.eval_chebyt(m, x), atol=1e-13)


def test_gegenbauer_accepts_matrices_and_rejects_outside():
    x = np.linspace(-1, 1, 12).reshape(3, 4)
    assert gegenbauer_normalized(1.0, 3, x).shape == (3, 4)
    assert gegenbauer_normalized(1.0, 2, 1.0 + 1e-13) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        gegenbauer_normalized(1.0, 2, 1.01)


def test_poly_eval_family():
    assert PolyEval(0, 3).family == "chebyshev-limit"
    assert PolyEval(1.5, 3).family == "gegenbauer"
    assert PolyEval(1.0, 2)(1.0) == pytest.approx(1.0)


@pytest.mark.parametrize("alpha, m", [(1, 3), (sympy.Rational(3, 2), 2), (2, 4)])
def test_gegenbauer_rodrigues(alpha, m):
    expr = gegenbauer_rodrigues(alpha, m)
    x = sympy.Symbol("x")
    for value in (sympy.Rational(-7, 10), sympy.Rational(1, 5), sympy.Rational(9, 10)):
        got = float(expr.subs(x, value).evalf(30))
        assert got == pytest.approx(special.eval_gegenbauer(m, float(alpha), float(value)), rel=1e-12)


def test_bell_partial_known_values():
    assert bell_partial(BellIndex(4, 2), [2, 3, 5]) == 4 * 2 * 5 + 3 * 3 ** 2
    assert bell_partial(BellIndex(5, 5), [3]) == 3 ** 5
    assert bell_partial(BellIndex(5, 1), [1, 2, 3, 4, 7]) == 7


@pytest.mark.parametrize("k, stirling", [(4, [1, 7, 6, 1]), (5, [1, 15, 25, 10, 1])])
def test_bell_partial_stirling_numbers(k, stirling):
    values = [bell_partial(BellIndex(k, j), [1] * (k - j + 1)) for j in range(1, k + 1)]
    assert values == stirling


def test_bell_index_validation():
    with pytest.raises(ValueError):
        BellIndex(3, 4)
    with pytest.raises(ValueError):
        bell_partial(BellIndex(3, 2), [1, 2, 3])


@settings(max_examples=40, deadline=None)
@given(k=st.integers(min_value=1, max_value=8),
       dg=st.fractions(min_value=-5, max_value=5, max_denominator=20),
       d2g=st.fractions(min_value=-5, max_value=5, max_denominator=20))
def test_faa_di_bruno_special_agrees_with_generic(k, dg, d2g):
    def F(j):
        return Fraction(j * j + 1, j + 2)

    derivs = [dg, d2g] + [Fraction(0)] * (k - 2)
    generic = faa_di_bruno_generic(k, F, derivs[:max(k, 2)])
    assert generic == faa_di_bruno_special(k, F, dg, d2g)


def test_faa_di_bruno_composition_exp():
    # D^3 exp(v²) at v = 1: (8v³ + 12v) e^{v²}
    v = 1.0
    value = faa_di_bruno_generic(3, lambda j: math.exp(v * v), [2 * v, 2.0, 0.0])
    assert value == pytest.approx(20.0 * math.e, rel=1e-14)


def test_central_difference_polynomial():
    f = lambda t: np.asarray(t) ** 4
    assert central_difference(f, 1.5, 1, 1e-2) == pytest.approx(4 * 1.5 ** 3, rel=1e-10)
    assert central_difference(f, 1.5, 2, 1e-2) == pytest.approx(12 * 1.5 ** 2, rel=1e-9)
    assert central_difference(f, 1.5, 3, 1e-2) == pytest.approx(24 * 1.5, rel=1e-7)
