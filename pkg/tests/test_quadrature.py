import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from src.core.quadrature import (
    NO_WEIGHT, QuadratureConfigError, QuadratureResult, QuadratureSpec, SingularWeight,
    eval_jacobi, gauss_jacobi_rule, gauss_legendre_rule, integrate, integrate_batch,
    integrate_singular,
)


@pytest.mark.parametrize("n, a, b", [(5, 0.0, 0.0), (16, 0.5, -0.5), (40, -0.5, 1.5), (64, 2.0, 0.0)])
def test_gauss_jacobi_rule_matches_scipy(n, a, b):
    nodes, weights = gauss_jacobi_rule(n, a, b)
    ref_nodes, ref_weights = special.roots_jacobi(n, a, b)
    np.testing.assert_allclose(nodes, ref_nodes, rtol=1e-12, atol=1e-14)
    np.testing.assert_allclose(weights, ref_weights, rtol=1e-10, atol=1e-15)


def test_gauss_legendre_rule_matches_numpy():
    nodes, weights = gauss_legendre_rule(20)
    ref_nodes, ref_weights = np.polynomial.legendre.leggauss(20)
    np.testing.assert_allclose(nodes, ref_nodes, atol=1e-14)
    np.testing.assert_allclose(weights, ref_weights, rtol=1e-12)


def test_rule_arrays_are_read_only():
    nodes, weights = gauss_jacobi_rule(8, 0.5, 0.5)
    assert not nodes.flags.writeable
    assert not weights.flags.writeable


def test_eval_jacobi_matches_scipy():
    x = np.linspace(-1, 1, 11)
    np.testing.assert_allclose(eval_jacobi(0.5, -0.5, 7, x), special.eval_jacobi(7, 0.5, -0.5, x),
                               rtol=1e-12, atol=1e-12)


def test_polynomial_exactness():
    # 8点ガウス則は15次まで厳密
    nodes, weights = gauss_legendre_rule(8)
    for k in range(16):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        assert float(weights @ nodes ** k) == pytest.approx(exact, abs=1e-14)


def test_integrate_smooth():
    result = integrate(np.sin, 0.0, math.pi)
    assert result.value == pytest.approx(2.0, abs=1e-12)
    assert result.converged


def test_integrate_singular_beta_function():
    # ∫_0^1 t^{-1/2} (1-t)^{1/2} dt = B(1/2, 3/2) = π/2
    result = integrate_singular(lambda t: np.ones_like(t), 0.0, 1.0, SingularWeight(-0.5, 0.5))
    assert result.value == pytest.approx(math.pi / 2, abs=1e-12)


def test_integrate_singular_with_smooth_factor():
    # ∫_0^1 t^{-1/2} e^t dt = √π erf(1)
    result = integrate_singular(np.exp, 0.0, 1.0, SingularWeight(-0.5, 0.0))
    assert result.value == pytest.approx(math.sqrt(math.pi) * math.erf(1.0), rel=1e-12)


@pytest.mark.parametrize("f_smooth, weight, expected", [
    (lambda t: np.ones_like(t), SingularWeight(-0.5, 0.0), 2.0),
    (lambda t: np.ones_like(t), SingularWeight(-0.5, -0.5), math.pi),
    # t · t^{1/2} (1-t)^{3/2} = B(5/2, 5/2)
    (lambda t: t, SingularWeight(0.5, 1.5), 3 * math.pi / 128),
])
def test_integrate_singular_beta_values(f_smooth, weight, expected):
    result = integrate_singular(f_smooth, 0.0, 1.0, weight)
    assert result.value == pytest.approx(expected, abs=1e-12)
    assert result.converged


def test_flat_bump_matches_refined_rule():
    def bump(t):
        return np.exp(-1.0 / (1.0 - t * t))

    coarse = integrate(bump, -1.0, 1.0)
    fine = integrate(bump, -1.0, 1.0, QuadratureSpec(nodes=640, rel_tol=1e-13, abs_tol=1e-15))
    assert coarse.value == pytest.approx(fine.value, abs=1e-10)
    assert fine.value == pytest.approx(0.44399, abs=1e-5)


@pytest.mark.parametrize("f, a, b", [
    (np.sin, 0.0, math.pi),
    (np.exp, 0.0, 1.0),
])
def test_error_estimate_shrinks_when_nodes_double(f, a, b):
    estimates = [integrate(f, a, b, QuadratureSpec(method="gauss-legendre", nodes=n,
                                                   max_refinements=1)).err_estimate
                 for n in (4, 8, 16)]
    for coarse, fine in zip(estimates, estimates[1:]):
        # 丸め誤差の水準までは単調
        assert fine <= coarse + 1e-14


def test_tanh_sinh_method():
    spec = QuadratureSpec(method="tanh-sinh")
    result = integrate_singular(lambda t: np.ones_like(t), 0.0, 1.0, SingularWeight(-0.5, 0.0), spec)
    assert result.value == pytest.approx(2.0, abs=1e-9)
    assert integrate(np.cos, 0.0, 1.0, spec).value == pytest.approx(math.sin(1.0), abs=1e-10)


def test_gauss_legendre_spec_switches_to_jacobi_for_weights():
    spec = QuadratureSpec(method="gauss-legendre")
    result = integrate_singular(lambda t: np.ones_like(t), 0.0, 1.0, SingularWeight(-0.5, 0.0), spec)
    assert result.value == pytest.approx(2.0, abs=1e-12)


def test_result_unpacks_to_value_and_error():
    value, err = integrate(np.exp, 0.0, 1.0)
    assert value == pytest.approx(math.e - 1.0, rel=1e-13)
    assert err >= 0


def test_integrate_batch_rows_and_empty_intervals():
    lo = np.array([0.0, 0.0, 1.0])
    hi = np.array([1.0, 2.0, 1.0])
    batch = integrate_batch(lambda t, c: c * t, lo, hi, NO_WEIGHT, None, args=(np.array([1.0, 3.0, 5.0]),))
    np.testing.assert_allclose(batch.values, [0.5, 6.0, 0.0], atol=1e-13)
    assert batch.all_converged


def test_invalid_interval_raises():
    with pytest.raises(QuadratureConfigError):
        integrate(np.exp, 1.0, 1.0)


@pytest.mark.parametrize("kwargs", [{"method": "simpson"}, {"nodes": 2}, {"rel_tol": 0.0},
                                    {"max_refinements": 0}])
def test_invalid_spec_raises(kwargs):
    with pytest.raises(QuadratureConfigError):
        QuadratureSpec(**kwargs)


def test_invalid_weight_raises():
    with pytest.raises(QuadratureConfigError):
        SingularWeight(-1.0, 0.0)
    with pytest.raises(QuadratureConfigError):
        gauss_jacobi_rule(4, -1.5, 0.0)


def test_with_options_returns_copy():
    spec = QuadratureSpec()
    finer = spec.with_options(nodes=128)
    assert finer.nodes == 128
    assert spec.nodes == 64


@settings(max_examples=30, deadline=None)
@given(c=st.floats(min_value=-50, max_value=50, allow_nan=False),
       d=st.floats(min_value=-50, max_value=50, allow_nan=False))
def test_linearity(c, d):
    base_f = integrate(np.exp, 0.0, 1.0).value
    base_g = integrate(np.cos, 0.0, 1.0).value
    combined = integrate(lambda t: c * np.exp(t) + d * np.cos(t), 0.0, 1.0).value
    assert combined == pytest.approx(c * base_f + d * base_g, rel=1e-12, abs=1e-12)


def test_quadrature_result_defaults():
    result = QuadratureResult(1.0, 0.0)
    assert result.converged
    assert tuple(result) == (1.0, 0.0)
