import math

import numpy as np
import pytest

from src.core.profiles import DataProfile, ProfileError, ProfileSpec, RadialProfile
from src.core.specfun import d_operator_fd


def test_radial_bump_support_and_peak():
    f = RadialProfile.bump(0.6, amplitude=2.0)
    assert f.eval(0.0) == pytest.approx(2.0 * math.exp(-1.0))
    assert f.eval(0.3) > 0
    np.testing.assert_array_equal(f.eval(np.array([0.6, 0.7, 0.99])), 0.0)


def test_radial_shell_is_zero_near_origin():
    f = RadialProfile.shell(0.5, 0.2)
    assert f.inner_radius == pytest.approx(0.3)
    assert f.support_radius == pytest.approx(0.7)
    assert f.eval(0.1) == 0.0
    assert f.eval(0.5) == pytest.approx(math.exp(-1.0))


def test_radial_profile_validation():
    with pytest.raises(ProfileError):
        RadialProfile.bump(1.0)
    with pytest.raises(ProfileError):
        RadialProfile.shell(0.1, 0.3)


def test_radial_field_evaluates_norm():
    f = RadialProfile.bump(0.8)
    points = np.array([[0.3, 0.4], [0.0, 0.0], [0.9, 0.0]])
    np.testing.assert_allclose(f.as_field()(points), f.eval(np.array([0.5, 0.0, 0.9])))


def test_radial_scaled():
    f = RadialProfile.bump(0.8)
    assert f.scaled(3.0).eval(0.2) == pytest.approx(3.0 * f.eval(0.2))
    assert f.scaled(3.0).describe()["kind"] == "derived"


def test_radial_sampled_interpolates_nodes():
    grid = np.linspace(0.0, 0.7, 15)
    values = np.cos(grid)
    f = RadialProfile.sampled(grid, values)
    np.testing.assert_allclose(f.eval(grid[:-1]), values[:-1], atol=1e-14)
    assert f.eval(0.75) == 0.0


def test_zero_profiles():
    assert RadialProfile.zero().eval(0.1) == 0.0
    assert np.all(DataProfile.zero().eval(np.linspace(0.1, 1.9, 10)) == 0.0)


def test_data_bump_support():
    g = DataProfile.bump(0.2, 0.6)
    assert g.support == (0.2, 0.6)
    assert g.eval(0.4) == pytest.approx(math.exp(-1.0))
    np.testing.assert_array_equal(g.eval(np.array([0.1, 0.2, 0.6, 1.0])), 0.0)


@pytest.mark.parametrize("support", [(0.0, 0.5), (0.5, 0.4), (1.0, 2.5)])
def test_data_bump_validation(support):
    with pytest.raises(ProfileError):
        DataProfile.bump(*support)


@pytest.mark.parametrize("grid, values", [
    ([0.5], [1.0]),
    ([0.5, 0.4, 0.7], [1.0, 2.0, 3.0]),
    ([0.5, 0.6, 0.7], [1.0, np.nan, 3.0]),
    ([0.5, 0.6, 0.7], [1.0, 2.0]),
])
def test_sampled_validation(grid, values):
    with pytest.raises(ProfileError):
        DataProfile.sampled(grid, values)


def test_h_and_g_round_trip():
    g = DataProfile.bump(0.4, 1.6)
    t = np.linspace(0.45, 1.55, 9)
    h = g.to_h(6)
    np.testing.assert_allclose(h.eval(t), t ** 4 * g.eval(t), rtol=1e-14)
    np.testing.assert_allclose(h.to_g(6).eval(t), g.eval(t), rtol=1e-13)


def test_scaled_and_plus():
    a = DataProfile.bump(0.2, 0.6)
    b = DataProfile.bump(1.0, 1.8)
    total = a.plus(b.scaled(2.0))
    assert total.support == (0.2, 1.8)
    t = np.array([0.4, 1.4])
    np.testing.assert_allclose(total.eval(t), a.eval(t) + 2.0 * b.eval(t))


@pytest.mark.parametrize("j", [1, 2])
def test_d_power_matches_finite_difference(j):
    g = DataProfile.bump(0.5, 1.5)
    analytic = g.d_power(j)
    for t in (0.8, 1.0, 1.25):
        expected = d_operator_fd(g.eval, t, j, 1e-3)
        assert analytic.eval(t) == pytest.approx(expected, rel=1e-5, abs=1e-8)


def test_d_power_requires_expression():
    g = DataProfile.sampled([0.5, 1.0, 1.5], [0.0, 1.0, 0.0])
    with pytest.raises(ProfileError):
        g.d_power(1)


def test_profile_spec_parse_and_build():
    spec = ProfileSpec.parse("bump:rho=0.6,amplitude=2")
    assert spec.is_radial
    f = spec.build_radial()
    assert f.support_radius == pytest.approx(0.6)
    assert f.eval(0.0) == pytest.approx(2.0 * math.exp(-1.0))

    data = ProfileSpec.parse("data-bump:lo=0.3,hi=0.9").build_data()
    assert data.support == (0.3, 0.9)
    assert ProfileSpec.parse("shell").build_radial().support_radius == pytest.approx(0.8)


@pytest.mark.parametrize("text", ["cone:rho=0.5", "bump:rho", "bump:rho=abc"])
def test_profile_spec_errors(text):
    with pytest.raises(ProfileError):
        ProfileSpec.parse(text)


def test_profile_spec_kind_mismatch():
    with pytest.raises(ProfileError):
        ProfileSpec.parse("data-bump").build_radial()
    with pytest.raises(ProfileError):
        ProfileSpec.parse("bump").build_data()


def test_describe_includes_parameters():
    info = DataProfile.bump(0.2, 0.6).describe()
    assert info["name"] == "data-bump"
    assert info["params"]["lo"] == 0.2
    assert info["support"] == [0.2, 0.6]
