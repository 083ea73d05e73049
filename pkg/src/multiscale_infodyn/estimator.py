# -*- coding: utf-8 -*-

#     multiscale_infodyn
#     Copyright (C) 2026  multiscale_infodyn developers
#
#     This program is free software: you can redistribute it and/or modify
#     it under the terms of the GNU General Public License as published by
#     the Free Software Foundation, either version 3 of the License, or
#     (at your option) any later version.
#
#     This program is distributed in the hope that it will be useful,
#     but WITHOUT ANY WARRANTY; without even the implied warranty of
#     MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#     GNU General Public License for more details.
#
#     You should have received a copy of the GNU General Public License
#     along with this program.  If not, see <https://www.gnu.org/licenses/>.

"""
Empirical counterpart of the analytic measures, used to cross check them.

Simulated realizations are coarse grained, then the partial variances are estimated by
least squares regression of the target on a truncated past (ell lags) of itself, or of
all channels.
"""

import logging
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import LengthError, ConditioningError, ParameterError
from .infodyn import InfoMeasures
from .linalg import RCOND_MIN
from .multiscale import ProcessingMode, check_tau
from .statespace import check_channel
from .var import TimeSeries, Origin, simulate, DEFAULT_BURN_IN, DEFAULT_GENERATOR

logger = logging.getLogger("estimator")

MAX_DEFAULT_LAGS = 50
CHUNK_ROWS = 65536


def default_lag_order(p, tau):
    """Regression truncation 3 * p * tau, capped at MAX_DEFAULT_LAGS"""
    return min(3 * p * tau, MAX_DEFAULT_LAGS)


@dataclass(frozen=True)
class EstimationSettings:
    """
    Settings of the regression oracle

    Attributes:
        lag_order: number of past samples ell used as regressors (None: default_lag_order)
        sample_count: number of simulated samples before coarse graining
        seed: seed of the simulation
        ridge: ridge added to the diagonal of the normalized normal equations
        burn_in: simulation burn-in
        generator: numpy bit generator name
    """

    lag_order: Optional[int] = None
    sample_count: int = 1000000
    seed: int = 0
    ridge: float = 0.0
    burn_in: int = DEFAULT_BURN_IN
    generator: str = DEFAULT_GENERATOR

    def resolved(self, p, tau):
        """Copy with lag_order filled in for a VAR order p at scale tau"""
        if self.lag_order is not None:
            return self
        return replace(self, lag_order=default_lag_order(p, tau))

    def validate(self, m):
        if self.lag_order is None or self.lag_order < 1:
            raise ParameterError(f"lag order must be >= 1, got {self.lag_order}")
        if self.sample_count <= 10 * self.lag_order * m:
            raise ParameterError(f"sample count {self.sample_count} must exceed 10 * lags * M = {10 * self.lag_order * m}")
        if self.ridge < 0:
            raise ParameterError(f"ridge must be >= 0, got {self.ridge}")
        return self


def coarse_grain(ts, tau, mode):
    """
    Rescale a time series at scale tau

    AVG gives the sliding window mean (length N - tau + 1), DWS keeps the mean of consecutive
    non-overlapping windows (length N // tau).

    Args:
        ts: a TimeSeries
        tau: scale factor >= 1
        mode: ProcessingMode

    Returns:
        a new TimeSeries

    Raises:
        LengthError if the series is shorter than tau
    """
    tau = check_tau(tau)
    mode = ProcessingMode(mode)
    if ts.n < tau:
        raise LengthError(f"series of length {ts.n} is shorter than the scale {tau}")
    metadata = dict(ts.metadata, tau=tau, mode=str(mode))
    if mode is ProcessingMode.AVG:
        data = np.lib.stride_tricks.sliding_window_view(ts.data, tau, axis=1).mean(axis=-1)
        return TimeSeries(data, Origin.AVERAGED, metadata)
    blocks = ts.n // tau
    data = ts.data[:, :blocks * tau].reshape(ts.m, blocks, tau).mean(axis=-1)
    return TimeSeries(data, Origin.DOWNSAMPLED, metadata)


def _lagged_normal_equations(x, lags):
    """
    Accumulate the normal equations of the regressions of each x_c[n] on x[:, n-1] .. x[:, n-lags]

    Regressor columns are ordered lag-major: column (k-1) * M + c holds channel c at lag k.

    Returns:
        (gram, cross, totals, rows) where gram = X'X, cross = X'Y (one column per channel)
        and totals holds y_c'y_c
    """
    m, n = x.shape
    xt = np.ascontiguousarray(x.T)
    width = m * lags
    gram = np.zeros((width, width))
    cross = np.zeros((width, m))
    totals = np.zeros(m)
    for start in range(lags, n, CHUNK_ROWS):
        stop = min(start + CHUNK_ROWS, n)
        design = np.hstack([xt[start - k:stop - k] for k in range(1, lags + 1)])
        y = xt[start:stop]
        gram += design.T @ design
        cross += design.T @ y
        totals += np.einsum("ij,ij->j", y, y)
    return gram, cross, totals, n - lags


def _residual_variance(gram, cross, total, rows, ridge):
    g = gram / rows
    b = cross / rows
    w = scipy.linalg.eigvalsh(g)
    if ridge == 0 and (w[-1] <= 0 or w[0] / w[-1] < RCOND_MIN):
        raise ConditioningError("regression design matrix is rank deficient, consider setting a ridge")
    g_reg = g + ridge * np.eye(g.shape[0])
    beta = scipy.linalg.solve(g_reg, b, assume_a="pos")
    return total / rows - 2 * beta @ b + beta @ g @ beta


def estimate_measures(ts, j, settings):
    """
    Estimate lambda_j, lambda_j|j, lambda_j|ij and the information measures from data

    lambda_j is the sample variance of channel j; lambda_j|j and lambda_j|ij are the residual
    variances of least squares regressions on ell lags of channel j and of all channels.
    All three use the same samples so that the variance ordering is preserved.

    Args:
        ts: a TimeSeries
        j: target channel, 1..M
        settings: EstimationSettings with lag_order set

    Returns:
        InfoMeasures
    """
    return estimate_all_measures(ts, [j], settings)[0]


def estimate_all_measures(ts, targets, settings):
    """
    As estimate_measures for several targets, sharing one pass over the data

    Returns:
        list of InfoMeasures in the order of targets
    """
    targets = [check_channel(j, ts.m) for j in targets]
    lags = settings.lag_order
    if lags is None or lags < 1:
        raise ParameterError(f"lag order must be >= 1, got {lags}")
    if ts.n <= lags + ts.m * lags:
        raise LengthError(f"series of length {ts.n} is too short for {lags} lags of {ts.m} channels")

    x = ts.data - ts.data.mean(axis=1, keepdims=True)
    gram, cross, totals, rows = _lagged_normal_equations(x, lags)

    results = []
    for j in targets:
        own = np.arange(lags) * ts.m + (j - 1)
        b, total = cross[:, j - 1], totals[j - 1]
        lambda_full = total / rows
        lambda_own = _residual_variance(gram[np.ix_(own, own)], b[own], total, rows, settings.ridge)
        lambda_all = _residual_variance(gram, b, total, rows, settings.ridge)
        results.append(InfoMeasures.from_variances(j, lambda_full, lambda_own, lambda_all))
    return results


def median_measures(samples):
    """
    Combine estimates from several seeds: each field is the median over the samples
    """
    if not samples:
        raise ParameterError("no estimates to combine")
    storage = float(np.median([s.storage for s in samples]))
    transfer = float(np.median([s.transfer for s in samples]))
    return InfoMeasures(target=samples[0].target,
                        lambda_full=float(np.median([s.lambda_full for s in samples])),
                        lambda_own=float(np.median([s.lambda_own for s in samples])),
                        lambda_all=float(np.median([s.lambda_all for s in samples])),
                        storage=storage, transfer=transfer, predictive=storage + transfer)


def oracle_sweep(model, taus, modes, targets, settings, seeds):
    """
    Empirical measures for every (tau, mode, target), median over simulations with the given seeds

    One realization of settings.sample_count samples is simulated per seed and coarse grained
    for every scale and mode.

    Args:
        model: a validated VarModel
        taus: scale factors
        modes: ProcessingMode values
        targets: target channels
        settings: EstimationSettings (lag_order None means default_lag_order per scale)
        seeds: list of seeds

    Returns:
        dict mapping (tau, mode, target) to InfoMeasures
    """
    if not seeds:
        raise ParameterError("at least one seed is required")
    modes = [ProcessingMode(mode) for mode in modes]
    estimates = {}
    for seed in seeds:
        logger.info(f"oracle: simulating {settings.sample_count} samples with seed {seed}")
        ts = simulate(model, settings.sample_count, seed, burn_in=settings.burn_in, generator=settings.generator)
        for tau in taus:
            scale_settings = settings.resolved(model.p, tau).validate(model.m)
            for mode in modes:
                coarse = coarse_grain(ts, tau, mode)
                for estimate in estimate_all_measures(coarse, targets, scale_settings):
                    estimates.setdefault((tau, mode, estimate.target), []).append(estimate)
    return {key: median_measures(values) for key, values in estimates.items()}
