import numpy as np
import pytest

from multiscale_infodyn.errors import CovarianceError, InstabilityError, DimensionError, ParameterError
from multiscale_infodyn.infodyn import autocovariances
from multiscale_infodyn.linalg import spectral_radius
from multiscale_infodyn.model_factory import bivariate_model
from multiscale_infodyn.var import VarModel, Origin, validate, companion_matrix, companion_iss, \
    draw_innovations, filter_innovations, simulate


def test_validate_accepts_presets(uni, bi, uni_strong):
    for model in (uni, bi, uni_strong):
        assert spectral_radius(companion_matrix(model)) < 1


def test_validate_rejects_unit_root():
    with pytest.raises(InstabilityError) as info:
        validate(bivariate_model(a1=1.0, b1=1))
    assert info.value.spectral_radius == pytest.approx(1.0)
    assert info.value.exit_code == 5


@pytest.mark.parametrize("sigma", [
    [[1.0, 0.5], [0.4, 1.0]],
    [[1.0, 2.0], [2.0, 1.0]],
    [[1.0, 0.0], [0.0, 0.0]],
])
def test_validate_rejects_bad_covariance(sigma):
    with pytest.raises(CovarianceError) as info:
        validate(VarModel(a=np.zeros((1, 2, 2)), sigma=sigma))
    assert info.value.exit_code == 4


def test_var_model_shapes():
    model = VarModel(a=[[0.5, 0.0], [0.1, 0.2]], sigma=np.eye(2))
    assert (model.p, model.m) == (1, 2)
    with pytest.raises(DimensionError):
        VarModel(a=np.zeros((2, 2, 3)), sigma=np.eye(2))
    with pytest.raises(DimensionError):
        VarModel(a=np.zeros((1, 2, 2)), sigma=np.eye(3))


def test_var_model_is_immutable(uni):
    with pytest.raises(ValueError):
        uni.a[0, 0, 0] = 1.0


def test_companion_matrix(uni):
    comp = companion_matrix(uni)
    assert comp.shape == (4, 4)
    np.testing.assert_array_equal(comp[:2], np.hstack(uni.a))
    np.testing.assert_array_equal(comp[2:, :2], np.eye(2))
    np.testing.assert_array_equal(comp[2:, 2:], np.zeros((2, 2)))


@pytest.mark.parametrize("preset", ["uni", "bi"])
def test_companion_iss_reproduces_var_recursion(preset, request):
    model = request.getfixturevalue(preset)
    u = draw_innovations(model, 10000, seed=3)
    iss = companion_iss(model)
    np.testing.assert_allclose(iss.filter_innovations(u), filter_innovations(model, u), rtol=0, atol=1e-12)


def test_simulation_is_reproducible(uni):
    first = simulate(uni, 2000, seed=42, burn_in=100)
    second = simulate(uni, 2000, seed=42, burn_in=100)
    np.testing.assert_array_equal(first.data, second.data)
    assert first.origin is Origin.ORIGINAL
    assert first.metadata["seed"] == 42
    assert first.metadata["generator"] == "PCG64"
    other = simulate(uni, 2000, seed=43, burn_in=100)
    assert not np.array_equal(first.data, other.data)


def test_simulation_single_sample(ar1):
    ts = simulate(ar1, 1, seed=0, burn_in=0)
    assert ts.data.shape == (1, 1)


def test_simulation_rejects_bad_arguments(ar1):
    with pytest.raises(ParameterError):
        simulate(ar1, 0, seed=0)
    with pytest.raises(ParameterError):
        simulate(ar1, 10, seed=0, burn_in=-1)
    with pytest.raises(ParameterError):
        simulate(ar1, 10, seed=0, generator="NoSuchGenerator")


def test_sample_mean_is_near_zero(uni):
    n = 100000
    ts = simulate(uni, n, seed=9)
    sd = ts.data.std(axis=1)
    assert np.all(np.abs(ts.data.mean(axis=1)) <= 5 * sd / np.sqrt(n))


@pytest.mark.slow
def test_ar1_sample_variance(ar1):
    ts = simulate(ar1, 1000000, seed=1)
    assert ts.data.var() == pytest.approx(4.0 / 3.0, rel=0.01)


@pytest.mark.slow
@pytest.mark.parametrize("preset", ["uni", "bi"])
def test_sample_covariances_match_analytic(preset, request):
    model = request.getfixturevalue(preset)
    ts = simulate(model, 1000000, seed=5)
    x = ts.data - ts.data.mean(axis=1, keepdims=True)
    gamma = autocovariances(companion_iss(model), 10)
    tolerance = 0.02 * np.max(np.diag(gamma[0]))
    for lag in range(11):
        # E[Y_{n+lag} Y_n']
        sample = x[:, lag:] @ x[:, :x.shape[1] - lag].T / (x.shape[1] - lag)
        np.testing.assert_allclose(np.diag(sample), np.diag(gamma[lag]), rtol=0.02, atol=tolerance)
        np.testing.assert_allclose(sample, gamma[lag], atol=tolerance)
