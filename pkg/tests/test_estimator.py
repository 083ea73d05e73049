import math

import numpy as np
import pytest

from multiscale_infodyn.errors import LengthError, ConditioningError, ParameterError
from multiscale_infodyn.estimator import EstimationSettings, coarse_grain, default_lag_order, estimate_measures, \
    estimate_all_measures, median_measures, oracle_sweep
from multiscale_infodyn.infodyn import InfoMeasures, multiscale_sweep
from multiscale_infodyn.multiscale import ProcessingMode
from multiscale_infodyn.var import TimeSeries, Origin, simulate


def test_coarse_grain_examples():
    ts = TimeSeries([[1.0, 3.0, 5.0, 7.0]])
    np.testing.assert_allclose(coarse_grain(ts, 2, ProcessingMode.DWS).data, [[2.0, 6.0]])
    np.testing.assert_allclose(coarse_grain(ts, 2, ProcessingMode.AVG).data, [[2.0, 4.0, 6.0]])
    np.testing.assert_allclose(coarse_grain(ts, 3, "dws").data, [[3.0]])
    assert coarse_grain(ts, 2, "avg").origin is Origin.AVERAGED
    assert coarse_grain(ts, 2, "dws").origin is Origin.DOWNSAMPLED


@pytest.mark.parametrize("mode", list(ProcessingMode))
def test_coarse_grain_unit_scale_is_identity(mode):
    data = np.arange(12.0).reshape(2, 6)
    np.testing.assert_array_equal(coarse_grain(TimeSeries(data), 1, mode).data, data)


@pytest.mark.parametrize("mode", list(ProcessingMode))
def test_coarse_grain_keeps_constants(mode):
    ts = TimeSeries(np.full((2, 100), 3.5))
    np.testing.assert_allclose(coarse_grain(ts, 7, mode).data, 3.5, atol=1e-12)


def test_coarse_grain_rejects_short_series():
    with pytest.raises(LengthError):
        coarse_grain(TimeSeries([[1.0, 2.0]]), 3, ProcessingMode.AVG)
    with pytest.raises(ParameterError):
        coarse_grain(TimeSeries([[1.0, 2.0]]), 0, ProcessingMode.AVG)


def test_default_lag_order():
    assert default_lag_order(2, 1) == 6
    assert default_lag_order(7, 2) == 42
    assert default_lag_order(7, 3) == 50


def test_settings_validation():
    assert EstimationSettings().resolved(2, 3).lag_order == 18
    assert EstimationSettings(lag_order=4).resolved(2, 3).lag_order == 4
    with pytest.raises(ParameterError):
        EstimationSettings(lag_order=10, sample_count=100).validate(2)
    with pytest.raises(ParameterError):
        EstimationSettings(lag_order=2, ridge=-1.0).validate(2)


def test_estimates_keep_variance_ordering(bi):
    ts = simulate(bi, 20000, seed=4)
    for m in estimate_all_measures(ts, [1, 2], EstimationSettings(lag_order=10)):
        assert m.lambda_full >= m.lambda_own >= m.lambda_all > 0


def test_single_and_shared_estimates_agree(uni):
    ts = simulate(uni, 20000, seed=8)
    settings = EstimationSettings(lag_order=5)
    shared = estimate_all_measures(ts, [2, 1], settings)
    assert [m.target for m in shared] == [2, 1]
    assert estimate_measures(ts, 1, settings).storage == pytest.approx(shared[1].storage, abs=1e-12)


def test_rank_deficient_design():
    rng = np.random.default_rng(0)
    x = rng.standard_normal(5000)
    ts = TimeSeries(np.vstack([x, x]))
    with pytest.raises(ConditioningError):
        estimate_measures(ts, 1, EstimationSettings(lag_order=3))
    m = estimate_measures(ts, 1, EstimationSettings(lag_order=3, ridge=1e-8))
    assert m.lambda_all > 0


def test_short_series_for_lags():
    with pytest.raises(LengthError):
        estimate_measures(TimeSeries(np.ones((2, 20))), 1, EstimationSettings(lag_order=10))


def test_median_of_estimates():
    samples = [InfoMeasures.from_variances(1, 2.0, v, 1.0) for v in (1.2, 1.5, 1.1)]
    combined = median_measures(samples)
    assert combined.lambda_own == 1.2
    assert combined.storage == pytest.approx(0.5 * math.log(2.0 / 1.2))
    with pytest.raises(ParameterError):
        median_measures([])


@pytest.mark.slow
def test_white_noise_estimates_vanish(white_noise):
    ts = simulate(white_noise, 1000000, seed=2)
    for m in estimate_all_measures(ts, [1, 2], EstimationSettings(lag_order=5)):
        assert abs(m.storage) <= 0.002
        assert abs(m.transfer) <= 0.002


@pytest.mark.slow
def test_ar1_storage_estimate(ar1):
    ts = simulate(ar1, 1000000, seed=3)
    m = estimate_measures(ts, 1, EstimationSettings(lag_order=20))
    assert m.storage == pytest.approx(0.5 * math.log(4.0 / 3.0), abs=0.005)


@pytest.mark.slow
@pytest.mark.parametrize("preset", ["uni", "bi"])
def test_oracle_agrees_with_exact_measures(preset, request):
    model = request.getfixturevalue(preset)
    taus = [1, 2, 3, 5]
    estimates = oracle_sweep(model, taus, [ProcessingMode.DWS], [1, 2], EstimationSettings(), seeds=[1, 2, 3])
    for row in multiscale_sweep(model, taus, ProcessingMode.DWS):
        estimate = estimates[(row.tau, ProcessingMode.DWS, row.target)]
        assert estimate.storage == pytest.approx(row.measures.storage, abs=0.01)
        assert estimate.transfer == pytest.approx(row.measures.transfer, abs=0.01)


@pytest.mark.slow
def test_truncated_regression_on_averaged_series(uni):
    # the averaging window puts spectral zeros on the unit circle, so a finite regression
    # underestimates storage; the gap closes as the number of lags grows
    tau = 3
    exact = {row.target: row.measures for row in multiscale_sweep(uni, [tau], ProcessingMode.AVG)}
    ts = coarse_grain(simulate(uni, 1000000, seed=6), tau, ProcessingMode.AVG)
    short = estimate_all_measures(ts, [1, 2], EstimationSettings(lag_order=6))
    long = estimate_all_measures(ts, [1, 2], EstimationSettings(lag_order=48))
    for s, g in zip(short, long):
        reference = exact[s.target].storage
        assert s.storage <= reference + 0.01
        assert abs(g.storage - reference) < abs(s.storage - reference)


@pytest.mark.slow
def test_transfer_estimate_at_unit_scale(uni):
    exact = {row.target: row.measures for row in multiscale_sweep(uni, [1], ProcessingMode.DWS)}
    ts = simulate(uni, 1000000, seed=12)
    estimate = estimate_measures(ts, 2, EstimationSettings().resolved(uni.p, 1))
    assert estimate.transfer == pytest.approx(exact[2].transfer, abs=0.005)
    assert estimate.lambda_all == pytest.approx(1.0, abs=0.005)


@pytest.mark.slow
def test_estimation_error_shrinks_with_length(uni):
    exact = {row.target: row.measures for row in multiscale_sweep(uni, [1], ProcessingMode.DWS)}[2]
    settings = EstimationSettings().resolved(uni.p, 1)

    def median_error(n, seeds):
        errors = [abs(estimate_measures(simulate(uni, n, seed=seed), 2, settings).transfer - exact.transfer)
                  for seed in seeds]
        return float(np.median(errors))

    assert median_error(1000000, range(10, 20)) < median_error(100000, range(10))
