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
Information storage and transfer of a target channel of an ISS process.

For target j and drivers i (all other channels):

    S_j      = 1/2 ln(lambda_j / lambda_j|j)      information storage
    T_i->j   = 1/2 ln(lambda_j|j / lambda_j|ij)   information transfer
    P_j      = S_j + T_i->j                       predictive information

lambda_j is the variance of y_j, lambda_j|j its variance given its own past and lambda_j|ij
its variance given the past of the whole process.  Measures are in nats.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegeneracyError, InfoDynError, ParameterError
from .linalg import solve_dlyap, symmetrize
from .multiscale import ProcessingMode, ScaleRequest, scale_iss
from .statespace import ss_to_iss, extract_target_submodel, check_channel

logger = logging.getLogger("infodyn")

MEASURE_SLACK = 1e-10
NATS_TO_BITS = 1.0 / math.log(2.0)


def clamp_measure(value, slack=MEASURE_SLACK):
    """Map values in [-slack, 0) to 0"""
    return 0.0 if -slack <= value < 0 else value


@dataclass(frozen=True)
class ProcessCovariance:
    """
    State covariance Omega = E[Z Z'] and zero lag process covariance Gamma = C Omega C' + Phi
    """

    omega: np.ndarray
    gamma: np.ndarray


@dataclass(frozen=True)
class InfoMeasures:
    """
    Variances and information measures for one target channel at one scale

    Attributes:
        target: channel index j (1-based)
        lambda_full: variance of y_j
        lambda_own: variance of y_j given its own past
        lambda_all: variance of y_j given the past of all channels
        storage: S_j in nats
        transfer: T_i->j in nats
        predictive: P_j = storage + transfer in nats
    """

    target: int
    lambda_full: float
    lambda_own: float
    lambda_all: float
    storage: float
    transfer: float
    predictive: float

    @classmethod
    def from_variances(cls, target, lambda_full, lambda_own, lambda_all):
        """
        Build the measures from the three variances

        Raises:
            DegeneracyError if any variance is not strictly positive
        """
        for name, value in (("lambda_full", lambda_full), ("lambda_own", lambda_own), ("lambda_all", lambda_all)):
            if not value > 0:
                raise DegeneracyError(f"{name} of channel {target} is not positive ({value})")
        storage = 0.5 * math.log(lambda_full / lambda_own)
        transfer = 0.5 * math.log(lambda_own / lambda_all)
        measures = cls(target=target, lambda_full=float(lambda_full), lambda_own=float(lambda_own),
                       lambda_all=float(lambda_all), storage=storage, transfer=transfer,
                       predictive=storage + transfer)
        if not measures.variance_chain_holds():
            logger.warning(f"variance ordering violated for channel {target}: "
                           f"{lambda_full:.12g} >= {lambda_own:.12g} >= {lambda_all:.12g} does not hold")
        return measures

    def variance_chain_holds(self, slack=MEASURE_SLACK):
        return (self.lambda_full - self.lambda_own >= -slack
                and self.lambda_own - self.lambda_all >= -slack
                and self.lambda_all > 0)

    @property
    def storage_bits(self):
        return self.storage * NATS_TO_BITS

    @property
    def transfer_bits(self):
        return self.transfer * NATS_TO_BITS

    @property
    def predictive_bits(self):
        return self.predictive * NATS_TO_BITS

    def clamped(self, slack=MEASURE_SLACK):
        """
        Copy with rounding noise removed: storage/transfer in [-slack, 0) become 0, for reports
        """
        storage, transfer = clamp_measure(self.storage, slack), clamp_measure(self.transfer, slack)
        return InfoMeasures(self.target, self.lambda_full, self.lambda_own, self.lambda_all,
                            storage, transfer, storage + transfer)


def process_covariance(iss):
    """
    Compute Omega from the Lyapunov equation Omega = A Omega A' + K Phi K' and Gamma = C Omega C' + Phi

    Args:
        iss: a valid IssModel

    Returns:
        a ProcessCovariance
    """
    omega = solve_dlyap(iss.a, symmetrize(iss.k @ iss.phi @ iss.k.T))
    gamma = symmetrize(iss.c @ omega @ iss.c.T + iss.phi)
    return ProcessCovariance(omega=omega, gamma=gamma)


def autocovariances(iss, max_lag, covariance=None):
    """
    Autocovariances Gamma_k = E[Y_{n+k} Y_n'] for k = 0..max_lag

    Gamma_0 = C Omega C' + Phi and Gamma_k = C A^(k-1) (A Omega C' + K Phi) for k >= 1.

    Args:
        iss: a valid IssModel
        max_lag: largest lag
        covariance: optional precomputed ProcessCovariance

    Returns:
        array of shape (max_lag + 1, M, M)
    """
    if max_lag < 0:
        raise ParameterError(f"max_lag must be >= 0, got {max_lag}")
    if covariance is None:
        covariance = process_covariance(iss)
    result = np.empty((max_lag + 1, iss.m, iss.m))
    result[0] = covariance.gamma
    g = iss.a @ covariance.omega @ iss.c.T + iss.k @ iss.phi
    for lag in range(1, max_lag + 1):
        result[lag] = iss.c @ g
        g = iss.a @ g
    return result


def measures(iss, j, covariance=None, method="doubling"):
    """
    Compute lambda_j, lambda_j|j, lambda_j|ij and S_j, T_i->j, P_j for target channel j

    Args:
        iss: a valid IssModel
        j: target channel, 1..M
        covariance: optional precomputed ProcessCovariance of iss
        method: DARE method for the target submodel

    Returns:
        InfoMeasures
    """
    j = check_channel(j, iss.m)
    if covariance is None:
        covariance = process_covariance(iss)
    lambda_full = covariance.gamma[j - 1, j - 1]
    lambda_all = iss.phi[j - 1, j - 1]
    own = ss_to_iss(extract_target_submodel(iss, j), method=method)
    lambda_own = own.phi[0, 0]
    return InfoMeasures.from_variances(j, lambda_full, lambda_own, lambda_all)


@dataclass(frozen=True)
class SweepRow:
    """
    One row of a multiscale sweep, error is set (and measures is None) when the scale failed
    """

    tau: int
    mode: ProcessingMode
    target: int
    measures: Optional[InfoMeasures] = None
    error: Optional[InfoDynError] = None


def _evaluate_scale(model, request, targets, method):
    try:
        iss = scale_iss(model, request, method=method)
        covariance = process_covariance(iss)
        rows = [SweepRow(request.tau, request.mode, j, measures(iss, j, covariance, method)) for j in targets]
    except InfoDynError as ex:
        logger.warning(f"scale {request.tau} ({request.mode}) failed: {ex}")
        rows = [SweepRow(request.tau, request.mode, j, error=ex) for j in targets]
    logger.debug(f"evaluated scale {request.tau} ({request.mode})")
    return rows


def multiscale_sweep(model, taus, mode, targets=None, workers=1, method="doubling"):
    """
    Evaluate the information measures of a VAR process over a list of scales

    Args:
        model: a validated VarModel
        taus: list of scale factors
        mode: ProcessingMode (or "avg"/"dws")
        targets: list of target channels (default: all channels)
        workers: number of threads evaluating scales concurrently
        method: DARE method

    Returns:
        list of SweepRow ordered by input scale then input target; a failing scale yields rows
        carrying the error instead of measures
    """
    if len(taus) == 0:
        raise ParameterError("at least one scale factor is required")
    try:
        mode = ProcessingMode(mode)
    except ValueError:
        raise ParameterError(f"unknown processing mode {mode!r}, expected avg or dws")
    targets = list(range(1, model.m + 1)) if targets is None else [check_channel(j, model.m) for j in targets]
    requests = [ScaleRequest(tau, mode) for tau in taus]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            per_scale = list(executor.map(lambda r: _evaluate_scale(model, r, targets, method), requests))
    else:
        per_scale = [_evaluate_scale(model, r, targets, method) for r in requests]
    return [row for rows in per_scale for row in rows]
