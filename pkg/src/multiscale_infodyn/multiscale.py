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
Rescaling of VAR processes at scale tau.

Averaging over windows of tau samples turns a VAR(p) into a VARMA(p, tau-1) with
B_0 = ... = B_{tau-1} = I/tau.  The VARMA is embedded as an innovations state space model
(state [Y_{n-1} .. Y_{n-p}, U_{n-1} .. U_{n-q}]), and keeping every tau-th sample of the
averaged process gives another state space model whose innovations form comes from a DARE.
"""

import enum
import logging
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError, SingularityError, SizeError
from .linalg import symmetrize
from .statespace import IssModel, SsModel, ss_to_iss
from .var import VarModel, companion_iss

logger = logging.getLogger("multiscale")

MAX_STATE_DIMENSION = 256


class ProcessingMode(enum.Enum):
    """Define the rescaling applied at each scale"""

    AVG = "avg"
    DWS = "dws"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ScaleRequest:
    """
    A scale factor tau and the processing mode (averaging only, or averaging and downsampling)
    """

    tau: int
    mode: ProcessingMode = ProcessingMode.DWS

    def __post_init__(self):
        check_tau(self.tau)
        object.__setattr__(self, "mode", ProcessingMode(self.mode))


def check_tau(tau):
    if isinstance(tau, bool) or not isinstance(tau, (int, np.integer)) or tau < 1:
        raise ParameterError(f"scale factor must be an integer >= 1, got {tau!r}")
    return int(tau)


@dataclass(frozen=True)
class VarmaModel:
    """
    VARMA(p, q) process Y_n = sum_k A_k Y_{n-k} + sum_l B_l U_{n-l}, U_n ~ N(0, Sigma)

    Args:
        a: AR matrices, shape (p, M, M)
        b: MA matrices B_0..B_q, shape (q+1, M, M)
        sigma: M x M covariance of U
    """

    a: np.ndarray
    b: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=np.float64)
        b = np.array(self.b, dtype=np.float64)
        sigma = np.array(self.sigma, dtype=np.float64)
        if a.ndim != 3 or b.ndim != 3 or a.shape[0] < 1 or b.shape[0] < 1:
            raise DimensionError(f"VARMA coefficients must have shape (p, M, M) and (q+1, M, M), got {a.shape} and {b.shape}")
        m = a.shape[1]
        if a.shape[1:] != (m, m) or b.shape[1:] != (m, m) or sigma.shape != (m, m):
            raise DimensionError("VARMA coefficient and covariance shapes are not conformal")
        for name, arr in (("a", a), ("b", b), ("sigma", sigma)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def m(self):
        return self.a.shape[1]

    @property
    def p(self):
        return self.a.shape[0]

    @property
    def q(self):
        return self.b.shape[0] - 1

    def filter_innovations(self, u):
        """
        Run the VARMA recursion on given innovations U from zero initial conditions

        Args:
            u: M x N array

        Returns:
            M x N array of process samples
        """
        u = np.asarray(u, dtype=np.float64)
        m, p, q = self.m, self.p, self.q
        if u.ndim != 2 or u.shape[0] != m:
            raise DimensionError(f"innovations must have shape ({m}, N), got {u.shape}")
        n = u.shape[1]
        ar = np.hstack(self.a)
        ma = np.hstack(self.b)
        y = np.zeros((n + p, m))
        up = np.vstack([np.zeros((q, m)), u.T])
        for t in range(n):
            y[t + p] = ar @ y[t:t + p][::-1].reshape(-1) + ma @ up[t:t + q + 1][::-1].reshape(-1)
        return y[p:].T.copy()


def average_varma(model, tau):
    """
    VARMA representation of the process averaged over windows of tau samples

    Args:
        model: a validated VarModel
        tau: scale factor >= 1

    Returns:
        a VarmaModel with the AR part of model and B_0..B_{tau-1} = I/tau
    """
    tau = check_tau(tau)
    b = np.repeat(np.eye(model.m)[np.newaxis] / tau, tau, axis=0)
    return VarmaModel(a=model.a, b=b, sigma=model.sigma)


def aoki_iss(varma):
    """
    Innovations state space representation of a VARMA(p, q) model

    For q = 0 this is the companion form of the VAR with innovation covariance B_0 Sigma B_0'.
    Otherwise the state is [Y_{n-1} .. Y_{n-p}, U_{n-1} .. U_{n-q}] of dimension M(p+q):

        A = [[A_1 .. A_p  B_1 .. B_q],      C = [A_1 .. A_p  B_1 .. B_q]
             [shift of the Y blocks  ],      K = [I_M 0 .. 0  B_0^-1 0 .. 0]'
             [0 ......................],      Phi = B_0 Sigma B_0'
             [shift of the U blocks  ]]

    Args:
        varma: a VarmaModel with invertible B_0

    Returns:
        an IssModel driven by the innovations B_0 U_n

    Raises:
        SingularityError if B_0 is singular
        SizeError if the state dimension would exceed MAX_STATE_DIMENSION
    """
    m, p, q = varma.m, varma.p, varma.q
    b0 = varma.b[0]
    if np.linalg.matrix_rank(b0) < m:
        raise SingularityError("MA coefficient B_0 is singular")
    phi = symmetrize(b0 @ varma.sigma @ b0.T)

    if q == 0:
        return companion_iss(VarModel(a=varma.a, sigma=phi))

    dim = m * (p + q)
    if dim > MAX_STATE_DIMENSION:
        raise SizeError(f"state dimension {dim} exceeds the limit of {MAX_STATE_DIMENSION}")

    top = np.hstack(list(varma.a) + list(varma.b[1:]))
    a = np.zeros((dim, dim))
    a[:m, :] = top
    # Y blocks shift down, the first U block is fed by the innovations, U blocks shift down
    a[m:m * p, :m * (p - 1)] = np.eye(m * (p - 1))
    a[m * (p + 1):, m * p:dim - m] = np.eye(m * (q - 1))

    k = np.zeros((dim, m))
    k[:m, :] = np.eye(m)
    k[m * p:m * (p + 1), :] = np.linalg.inv(b0)

    logger.debug(f"aoki_iss: M={m} p={p} q={q} state dimension={dim}")
    return IssModel(a=a, c=top, k=k, phi=phi)


def downsample_iss(avg, tau, method="doubling"):
    """
    Innovations state space model of the process keeping every tau-th sample of an ISS process

    The SS model (A^tau, C, Xi_tau, Phi, Ups_tau) with

        Ups_tau = A^(tau-1) K Phi
        Xi_tau  = A Xi_(tau-1) A' + K Phi K',   Xi_1 = K Phi K'

    is converted to innovations form with statespace.ss_to_iss.

    Args:
        avg: IssModel of the (averaged) process
        tau: downsampling factor >= 1
        method: DARE method

    Returns:
        an IssModel for the downsampled process
    """
    tau = check_tau(tau)
    k_phi = avg.k @ avg.phi
    noise = symmetrize(k_phi @ avg.k.T)
    xi = noise
    for _ in range(tau - 1):
        xi = symmetrize(avg.a @ xi @ avg.a.T + noise)
    ups = np.linalg.matrix_power(avg.a, tau - 1) @ k_phi
    ss = SsModel(a=np.linalg.matrix_power(avg.a, tau), c=avg.c, xi=xi, psi=avg.phi, ups=ups)
    return ss_to_iss(ss, method=method)


def scale_iss(model, request, method="doubling"):
    """
    ISS model of a VAR process rescaled according to a ScaleRequest

    Args:
        model: a validated VarModel
        request: ScaleRequest (tau, mode)
        method: DARE method used for downsampling

    Returns:
        an IssModel for the averaged (AVG) or averaged and downsampled (DWS) process
    """
    averaged = aoki_iss(average_varma(model, request.tau))
    if request.mode is ProcessingMode.AVG:
        return averaged.validate()
    return downsample_iss(averaged, request.tau, method=method)
