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
Vector autoregressive VAR(p) processes

    Y_n = A_1 Y_{n-1} + ... + A_p Y_{n-p} + U_n,   U_n ~ N(0, Sigma)

definition, validation, simulation and the companion-form innovations state space model.
"""

import enum
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DimensionError, CovarianceError, InstabilityError, ParameterError
from .linalg import as_matrix, is_symmetric, is_pd, spectral_radius
from .statespace import IssModel

logger = logging.getLogger("var")

DEFAULT_BURN_IN = 10000
DEFAULT_GENERATOR = "PCG64"


class Origin(enum.Enum):
    """How a time series was produced"""

    ORIGINAL = "original"
    AVERAGED = "averaged"
    DOWNSAMPLED = "downsampled"

    def __str__(self):
        return self.value


def _freeze(arr):
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class VarModel:
    """
    Parameters of a VAR(p) process

    Args:
        a: coefficient matrices A_1..A_p, array-like of shape (p, M, M) (a single M x M matrix means p=1)
        sigma: M x M innovation covariance
    """

    a: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=np.float64)
        if a.ndim == 2:
            a = a[np.newaxis]
        elif a.ndim == 0:
            a = a.reshape(1, 1, 1)
        if a.ndim != 3 or a.shape[1] != a.shape[2] or a.shape[0] < 1 or a.shape[1] < 1:
            raise DimensionError(f"VAR coefficients must have shape (p, M, M), got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise DimensionError("VAR coefficients contain NaN or Inf entries")
        sigma = as_matrix(self.sigma, "Sigma")
        if sigma.shape != (a.shape[1], a.shape[1]):
            raise DimensionError(f"Sigma has shape {sigma.shape}, expected {(a.shape[1], a.shape[1])}")
        object.__setattr__(self, "a", _freeze(a))
        object.__setattr__(self, "sigma", _freeze(sigma))

    @property
    def m(self):
        return self.a.shape[1]

    @property
    def p(self):
        return self.a.shape[0]


@dataclass(frozen=True)
class TimeSeries:
    """
    A finite realization of an M-channel process

    Args:
        data: M x N array, one row per channel
        origin: Origin of the samples
        metadata: free-form provenance (generator, seed, scale...)
    """

    data: np.ndarray
    origin: Origin = Origin.ORIGINAL
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64, ndmin=2)
        if data.ndim != 2 or data.shape[1] < 1:
            raise DimensionError(f"time series data must be M x N with N >= 1, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise DimensionError("time series contains NaN or Inf samples")
        object.__setattr__(self, "data", _freeze(data))

    @property
    def m(self):
        return self.data.shape[0]

    @property
    def n(self):
        return self.data.shape[1]


def companion_matrix(model):
    """
    Build the Mp x Mp companion matrix [[A_1 ... A_p], [I 0], ...] of a VAR model
    """
    m, p = model.m, model.p
    comp = np.zeros((m * p, m * p))
    comp[:m, :] = np.hstack(model.a)
    comp[m:, :-m] = np.eye(m * (p - 1))
    return comp


def validate(model):
    """
    Check that a VAR model describes a stationary process with a valid innovation covariance

    Args:
        model: a VarModel

    Returns:
        the same model

    Raises:
        CovarianceError if Sigma is not symmetric positive definite
        InstabilityError if the companion matrix has spectral radius >= 1
    """
    if not is_symmetric(model.sigma):
        raise CovarianceError("Sigma is not symmetric")
    if not is_pd(model.sigma):
        raise CovarianceError("Sigma is not positive definite")
    rho = spectral_radius(companion_matrix(model))
    if rho >= 1:
        raise InstabilityError(f"VAR model is not stationary, companion spectral radius is {rho:.6f}", rho)
    logger.debug(f"validated VAR model M={model.m} p={model.p} spectral radius={rho:.6f}")
    return model


def companion_iss(model):
    """
    Companion-form innovations state space representation of a VAR model

    The state is Z_n = [Y_{n-1}' ... Y_{n-p}']', so A is the companion matrix,
    C = [A_1 ... A_p], K = [I_M 0 ... 0]' and Phi = Sigma.

    Args:
        model: a validated VarModel

    Returns:
        an IssModel with state dimension M*p
    """
    m, p = model.m, model.p
    k = np.zeros((m * p, m))
    k[:m, :] = np.eye(m)
    return IssModel(a=companion_matrix(model), c=np.hstack(model.a), k=k, phi=model.sigma)


def draw_innovations(model, n, seed, generator=DEFAULT_GENERATOR):
    """
    Draw n Gaussian innovations with covariance Sigma from a private, seeded generator

    Args:
        model: a VarModel
        n: number of samples
        seed: integer seed
        generator: name of a numpy bit generator (for example "PCG64" or "Philox")

    Returns:
        M x n array of innovations
    """
    if n < 1:
        raise ParameterError(f"sample count must be >= 1, got {n}")
    try:
        bit_generator = getattr(np.random, generator)(seed)
    except (AttributeError, TypeError):
        raise ParameterError(f"unknown numpy bit generator {generator}")
    rng = np.random.Generator(bit_generator)
    chol = scipy.linalg.cholesky(model.sigma, lower=True)
    z = rng.standard_normal((model.m, n))
    return chol @ z


def filter_innovations(model, u):
    """
    Run the VAR recursion on a given innovation sequence from zero initial conditions

    Args:
        model: a VarModel
        u: M x N innovations

    Returns:
        M x N array of process samples
    """
    u = np.asarray(u, dtype=np.float64)
    m, p = model.m, model.p
    if u.ndim != 2 or u.shape[0] != m:
        raise DimensionError(f"innovations must have shape ({m}, N), got {u.shape}")
    n = u.shape[1]
    coefficients = np.hstack(model.a)
    # row t holds Y_{t-p} ... the padding rows are the zero initial conditions
    y = np.zeros((n + p, m))
    ut = u.T
    for t in range(n):
        past = y[t:t + p][::-1].reshape(-1)
        y[t + p] = coefficients @ past + ut[t]
    return y[p:].T.copy()


def simulate(model, n, seed, burn_in=DEFAULT_BURN_IN, generator=DEFAULT_GENERATOR):
    """
    Simulate a realization of a VAR process

    Args:
        model: a validated VarModel
        n: number of samples to return
        seed: integer seed, the output is bit reproducible for fixed arguments
        burn_in: number of leading samples discarded to forget the zero initial conditions
        generator: numpy bit generator name

    Returns:
        a TimeSeries of shape M x n
    """
    if n < 1:
        raise ParameterError(f"sample count must be >= 1, got {n}")
    if burn_in < 0:
        raise ParameterError(f"burn-in must be >= 0, got {burn_in}")
    u = draw_innovations(model, n + burn_in, seed, generator)
    y = filter_innovations(model, u)
    metadata = {"generator": generator, "normal_sampler": "numpy.random.Generator.standard_normal",
                "seed": seed, "burn_in": burn_in}
    return TimeSeries(y[:, burn_in:], Origin.ORIGINAL, metadata)
