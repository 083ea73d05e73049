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
State space models

general form (SS):          X_{n+1} = A X_n + W_n,    Y_n = C X_n + V_n
    with E[W W'] = Xi, E[V V'] = Psi, E[W V'] = Ups

innovations form (ISS):     Z_{n+1} = A Z_n + K E_n,  Y_n = C Z_n + E_n
    with E[E E'] = Phi

plus the SS -> ISS conversion through the DARE and the single target submodel used to
obtain the partial variance of one channel given its own past.
"""

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, CovarianceError, InstabilityError, NonStabilizingError, ChannelIndexError
from .linalg import as_matrix, is_psd, is_pd, spectral_radius, solve_dare, symmetrize, STABILITY_MARGIN

logger = logging.getLogger("statespace")


def _frozen_matrix(value, name):
    arr = as_matrix(value, name)
    arr.setflags(write=False)
    return arr


def _check_shapes(shapes):
    for name, (m, expected) in shapes.items():
        if m.shape != expected:
            raise DimensionError(f"{name} has shape {m.shape}, expected {expected}")


@dataclass(frozen=True)
class SsModel:
    """
    Parameters (A, C, Xi, Psi, Ups) of a general state space model
    """

    a: np.ndarray
    c: np.ndarray
    xi: np.ndarray
    psi: np.ndarray
    ups: np.ndarray

    def __post_init__(self):
        for name in ("a", "c", "xi", "psi", "ups"):
            object.__setattr__(self, name, _frozen_matrix(getattr(self, name), name))
        nl, nm = self.a.shape[0], self.c.shape[0]
        _check_shapes({"A": (self.a, (nl, nl)), "C": (self.c, (nm, nl)), "Xi": (self.xi, (nl, nl)),
                       "Psi": (self.psi, (nm, nm)), "Ups": (self.ups, (nl, nm))})

    @property
    def l(self):
        return self.a.shape[0]

    @property
    def m(self):
        return self.c.shape[0]

    def validate(self):
        """
        Check the SS invariants: stable A, PSD noise covariances, PSD joint noise covariance

        Returns:
            this model
        """
        rho = spectral_radius(self.a)
        if rho >= 1:
            raise InstabilityError(f"state transition has spectral radius {rho:.6f}", rho)
        if not is_psd(self.xi):
            raise CovarianceError("state noise covariance Xi is not symmetric PSD")
        if not is_psd(self.psi):
            raise CovarianceError("observation noise covariance Psi is not symmetric PSD")
        joint = symmetrize(np.block([[self.xi, self.ups], [self.ups.T, self.psi]]))
        if not is_psd(joint):
            raise CovarianceError("joint noise covariance [[Xi, Ups], [Ups', Psi]] is not PSD")
        return self


@dataclass(frozen=True)
class IssModel:
    """
    Parameters (A, C, K, Phi) of an innovations form state space model
    """

    a: np.ndarray
    c: np.ndarray
    k: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        for name in ("a", "c", "k", "phi"):
            object.__setattr__(self, name, _frozen_matrix(getattr(self, name), name))
        nl, nm = self.a.shape[0], self.c.shape[0]
        _check_shapes({"A": (self.a, (nl, nl)), "C": (self.c, (nm, nl)), "K": (self.k, (nl, nm)),
                       "Phi": (self.phi, (nm, nm))})

    @property
    def l(self):
        return self.a.shape[0]

    @property
    def m(self):
        return self.c.shape[0]

    def validate(self):
        """
        Check the ISS invariants: stable A, PD innovation covariance, invertible innovations
        (spectral radius of A - K C at most 1 + STABILITY_MARGIN, the averaged processes sit on the boundary)

        Returns:
            this model
        """
        rho = spectral_radius(self.a)
        if rho >= 1:
            raise InstabilityError(f"state transition has spectral radius {rho:.6f}", rho)
        if not is_pd(self.phi):
            raise CovarianceError("innovation covariance Phi is not symmetric positive definite")
        rho_closed = spectral_radius(self.a - self.k @ self.c)
        if rho_closed > 1 + STABILITY_MARGIN:
            raise NonStabilizingError(f"innovations are not invertible, spectral radius of A-KC is {rho_closed:.6f}")
        return self

    def as_ss(self):
        """
        Reinterpret this ISS as a general SS model with Xi = K Phi K', Psi = Phi, Ups = K Phi
        """
        k_phi = self.k @ self.phi
        return SsModel(a=self.a, c=self.c, xi=symmetrize(k_phi @ self.k.T), psi=self.phi, ups=k_phi)

    def filter_innovations(self, e):
        """
        Run the ISS recursion on a given innovation sequence from a zero initial state

        Args:
            e: M x N innovations

        Returns:
            M x N array of observations
        """
        e = np.asarray(e, dtype=np.float64)
        if e.ndim != 2 or e.shape[0] != self.m:
            raise DimensionError(f"innovations must have shape ({self.m}, N), got {e.shape}")
        z = np.zeros(self.l)
        y = np.empty_like(e)
        for t in range(e.shape[1]):
            y[:, t] = self.c @ z + e[:, t]
            z = self.a @ z + self.k @ e[:, t]
        return y


def ss_to_iss(ss, method="doubling"):
    """
    Convert a general state space model to innovations form by solving its DARE

    Args:
        ss: an SsModel
        method: DARE method, see linalg.solve_dare

    Returns:
        an IssModel with the same A and C

    Raises:
        errors from SsModel.validate and linalg.solve_dare
    """
    ss.validate()
    solution = solve_dare(ss.a, ss.c, ss.xi, ss.psi, ss.ups, method=method)
    return IssModel(a=ss.a, c=ss.c, k=solution.k, phi=solution.phi).validate()


def check_channel(j, m):
    if isinstance(j, bool) or not isinstance(j, (int, np.integer)) or j < 1 or j > m:
        raise ChannelIndexError(f"channel index {j} is outside 1..{m}")
    return int(j)


def extract_target_submodel(iss, j):
    """
    Build the SS submodel that observes only channel j of an ISS process

    The state equation is kept, the observation is the j-th row of C, so the parameters are
    (A, C_j, K Phi K', Phi(j,j), column j of K Phi).  Converting it with ss_to_iss gives the
    variance of y_j given its own past as the (scalar) innovation covariance.

    Args:
        iss: an IssModel
        j: target channel, 1..M

    Returns:
        an SsModel with a single observed channel
    """
    j = check_channel(j, iss.m)
    k_phi = iss.k @ iss.phi
    return SsModel(a=iss.a,
                   c=iss.c[j - 1:j, :],
                   xi=symmetrize(k_phi @ iss.k.T),
                   psi=iss.phi[j - 1:j, j - 1:j],
                   ups=k_phi[:, j - 1:j])
