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
Small dense matrix kernel: spectral radius, symmetry/PSD checks, discrete Lyapunov
and discrete algebraic Riccati (DARE) solvers.

Matrices are plain 2-D float64 numpy arrays.  All functions are pure and never modify
their arguments.
"""

import logging
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import DimensionError, SchemaError, CovarianceError, InstabilityError, \
    ConvergenceError, SingularityError, NonStabilizingError, ParameterError

logger = logging.getLogger("linalg")

SYMMETRY_TOL = 1e-10
PSD_TOL = 1e-10
RCOND_MIN = 1e-13

LYAP_DECAY_TOL = 1e-14
LYAP_MAX_DOUBLINGS = 200
LYAP_RESIDUAL_TOL = 1e-10

DARE_CHANGE_TOL = 1e-12
DARE_MAX_ITERATIONS = 1000000
DARE_MAX_DOUBLINGS = 100
DARE_RESIDUAL_TOL = 1e-9

# closed loop radius accepted above 1 for critical (unit circle) cases, see ss_to_iss
STABILITY_MARGIN = 1e-5
UNIT_CIRCLE_TOL = 1e-6

DARE_METHODS = ("doubling", "iteration")


class DareSolution(NamedTuple):
    p: np.ndarray
    k: np.ndarray
    phi: np.ndarray


def as_matrix(m, name="matrix"):
    """
    Coerce a value to a finite 2-D float64 array

    Args:
        m: array-like (scalars become 1x1 matrices)
        name: used in error messages

    Returns:
        a new numpy array

    Raises:
        DimensionError if the value has more than 2 dimensions
        SchemaError if any entry is NaN or Inf
    """
    arr = np.array(m, dtype=np.float64, ndmin=2)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise SchemaError(f"{name} contains NaN or Inf entries")
    return arr


def symmetrize(m):
    return 0.5 * (m + m.T)


def max_abs(m):
    return float(np.max(np.abs(m))) if m.size else 0.0


def _require_square(m, name):
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {m.shape}")


def is_symmetric(m, tol=SYMMETRY_TOL):
    """
    Check symmetry within a tolerance relative to the largest absolute entry
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return max_abs(m - m.T) <= tol * max_abs(m)


def is_psd(m, tol=PSD_TOL, scale=None):
    """
    Check that a symmetric matrix is positive semi-definite: smallest eigenvalue >= -tol * scale

    scale defaults to the trace of m
    """
    m = np.asarray(m, dtype=np.float64)
    if not is_symmetric(m):
        return False
    if m.size == 0:
        return True
    w = scipy.linalg.eigvalsh(symmetrize(m))
    if scale is None:
        scale = np.trace(m)
    return w[0] >= -tol * abs(scale)


def is_pd(m, rcond_min=RCOND_MIN):
    m = np.asarray(m, dtype=np.float64)
    if not is_symmetric(m) or m.size == 0:
        return False
    w = scipy.linalg.eigvalsh(symmetrize(m))
    return w[0] > 0 and w[0] / w[-1] >= rcond_min


def spectral_radius(m):
    """
    Compute the largest absolute eigenvalue of a square matrix

    Args:
        m: square matrix

    Returns:
        the spectral radius as a float

    Raises:
        DimensionError if m is not square
    """
    m = np.asarray(m, dtype=np.float64)
    _require_square(m, "matrix")
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(scipy.linalg.eigvals(m))))


def spd_solve(m, b, name="matrix"):
    """
    Solve m x = b for a symmetric positive definite m via a Cholesky factorization

    Args:
        m: symmetric positive definite matrix
        b: right hand side (vector or matrix)
        name: used in error messages

    Returns:
        the solution x

    Raises:
        SingularityError if m is not PD or its reciprocal condition number is below RCOND_MIN
    """
    m = symmetrize(np.asarray(m, dtype=np.float64))
    w = scipy.linalg.eigvalsh(m)
    if w[0] <= 0 or w[0] / w[-1] < RCOND_MIN:
        raise SingularityError(f"{name} is numerically singular (eigenvalues {w[0]:.3e} .. {w[-1]:.3e})")
    try:
        factor = scipy.linalg.cho_factor(m, lower=True)
    except scipy.linalg.LinAlgError as ex:
        raise SingularityError(f"{name} Cholesky factorization failed: {ex}")
    return scipy.linalg.cho_solve(factor, b)


def solve_dlyap(a, q):
    """
    Solve the discrete Lyapunov equation X = A X A' + Q by doubling

    After k doublings X holds the partial sum of A^i Q A^i' for i < 2^k; the iteration stops
    when max|A^(2^k)| falls below LYAP_DECAY_TOL.

    Args:
        a: L x L matrix with spectral radius < 1
        q: L x L symmetric PSD matrix

    Returns:
        the symmetric PSD solution X

    Raises:
        InstabilityError if spectral_radius(a) >= 1
        ConvergenceError if the doubling cap is hit or the residual check fails
    """
    a = as_matrix(a, "A")
    q = as_matrix(q, "Q")
    _require_square(a, "A")
    if q.shape != a.shape:
        raise DimensionError(f"Q has shape {q.shape}, expected {a.shape}")
    if not is_psd(q):
        raise CovarianceError("Q must be symmetric positive semi-definite")

    rho = spectral_radius(a)
    if rho >= 1:
        raise InstabilityError(f"Lyapunov equation needs a stable A, spectral radius is {rho:.6f}", rho)

    x = symmetrize(q)
    ak = a
    for doubling in range(LYAP_MAX_DOUBLINGS):
        x = symmetrize(x + ak @ x @ ak.T)
        ak = ak @ ak
        if max_abs(ak) <= LYAP_DECAY_TOL:
            break
    else:
        raise ConvergenceError(f"Lyapunov doubling did not converge in {LYAP_MAX_DOUBLINGS} doublings")

    residual = max_abs(x - a @ x @ a.T - q)
    if residual > LYAP_RESIDUAL_TOL * (1 + max_abs(q)):
        raise ConvergenceError(f"Lyapunov residual {residual:.3e} exceeds tolerance")
    logger.debug(f"solve_dlyap: L={a.shape[0]} doublings={doubling + 1} residual={residual:.2e}")
    return x


def riccati_map(p, a, c, xi, psi, ups):
    """
    One step of the Riccati difference equation

        f(P) = A P A' + Xi - (A P C' + Ups)(C P C' + Psi)^-1 (C P A' + Ups')
    """
    phi = c @ p @ c.T + psi
    g = a @ p @ c.T + ups
    return symmetrize(a @ p @ a.T + xi - g @ spd_solve(phi, g.T, "C P C' + Psi"))


def dare_residual(p, a, c, xi, psi, ups):
    """Max absolute entry of f(P) - P for the DARE with the given parameters"""
    return max_abs(riccati_map(p, a, c, xi, psi, ups) - p)


def _check_dare_inputs(a, c, xi, psi, ups):
    a = as_matrix(a, "A")
    c = as_matrix(c, "C")
    xi = as_matrix(xi, "Xi")
    psi = as_matrix(psi, "Psi")
    ups = as_matrix(ups, "Upsilon")
    _require_square(a, "A")
    nl = a.shape[0]
    nm = c.shape[0]
    expected = {"C": (c, (nm, nl)), "Xi": (xi, (nl, nl)), "Psi": (psi, (nm, nm)), "Upsilon": (ups, (nl, nm))}
    for name, (m, shape) in expected.items():
        if m.shape != shape:
            raise DimensionError(f"{name} has shape {m.shape}, expected {shape}")
    if not is_psd(xi):
        raise CovarianceError("Xi must be symmetric positive semi-definite")
    if not is_symmetric(psi):
        raise CovarianceError("Psi must be symmetric")
    return a, c, xi, psi, ups


def _unit_circle_pencil_eigenvalues(a, c, xi, psi, ups):
    """
    Count generalized eigenvalues of the symplectic pencil of the DARE that lie on the unit circle

        [[As', 0], [-Qs, I]] - z [[I, G], [0, As]],  As = A - Ups Psi^-1 C,  Qs = Xi - Ups Psi^-1 Ups',
        G = C' Psi^-1 C

    A nonzero count means the closed loop of the stabilizing solution has eigenvalues on the unit circle
    """
    nl = a.shape[0]
    a_s = a - ups @ spd_solve(psi, c, "Psi")
    q_s = symmetrize(xi - ups @ spd_solve(psi, ups.T, "Psi"))
    g = symmetrize(c.T @ spd_solve(psi, c, "Psi"))
    eye = np.eye(nl)
    zero = np.zeros((nl, nl))
    lhs = np.block([[a_s.T, zero], [-q_s, eye]])
    rhs = np.block([[eye, g], [zero, a_s]])
    alpha, beta = scipy.linalg.eigvals(lhs, rhs, homogeneous_eigvals=True)
    alpha, beta = np.abs(alpha), np.abs(beta)
    size = np.maximum(alpha, beta)
    finite = size > RCOND_MIN * max(1.0, max_abs(lhs), max_abs(rhs))
    return int(np.sum(finite & (np.abs(alpha - beta) <= UNIT_CIRCLE_TOL * size)))


def _dare_by_iteration(a, c, xi, psi, ups):
    if _unit_circle_pencil_eigenvalues(a, c, xi, psi, ups):
        raise ConvergenceError("the DARE is critical (closed loop eigenvalues on the unit circle), "
                               "fixed point iteration cannot reach the tolerance, use the doubling method")
    p = xi
    for iteration in range(DARE_MAX_ITERATIONS):
        p_next = riccati_map(p, a, c, xi, psi, ups)
        change = max_abs(p_next - p)
        p = p_next
        if change <= DARE_CHANGE_TOL * (1 + max_abs(p)):
            logger.debug(f"solve_dare: fixed point iteration converged after {iteration + 1} steps")
            return p
    raise ConvergenceError(f"Riccati iteration did not converge in {DARE_MAX_ITERATIONS} steps")


def _dare_by_doubling(a, c, xi, psi, ups):
    # decorrelate the noises, then run the structured doubling recursion on
    #   P = As P (I + G P)^-1 As' + Qs,  G = C' Psi^-1 C
    # H_k equals iterate 2^k of the Riccati recursion started from P = 0
    nl = a.shape[0]
    a_s = a - ups @ spd_solve(psi, c, "Psi")
    q_s = symmetrize(xi - ups @ spd_solve(psi, ups.T, "Psi"))
    if not is_psd(q_s, scale=np.trace(xi)):
        raise CovarianceError("joint noise covariance [[Xi, Ups], [Ups', Psi]] is not PSD")

    ak = a_s.T
    gk = symmetrize(c.T @ spd_solve(psi, c, "Psi"))
    hk = q_s
    eye = np.eye(nl)
    for doubling in range(DARE_MAX_DOUBLINGS):
        w = eye + gk @ hk
        try:
            w_ak = scipy.linalg.solve(w, ak)
            w_gk = scipy.linalg.solve(w, gk)
        except scipy.linalg.LinAlgError as ex:
            raise SingularityError(f"doubling step {doubling}: I + G H is singular ({ex})")
        increment = symmetrize(ak.T @ hk @ w_ak)
        gk = symmetrize(gk + ak @ w_gk @ ak.T)
        hk = hk + increment
        ak = ak @ w_ak
        if not np.all(np.isfinite(hk)):
            raise ConvergenceError(f"doubling diverged at step {doubling}")
        if max_abs(increment) <= DARE_CHANGE_TOL * (1 + max_abs(hk)):
            logger.debug(f"solve_dare: doubling converged after {doubling + 1} doublings")
            return hk
    raise ConvergenceError(f"Riccati doubling did not converge in {DARE_MAX_DOUBLINGS} doublings")


def solve_dare(a, c, xi, psi, ups, method="doubling"):
    """
    Solve the filtering DARE

        P = A P A' + Xi - (A P C' + Ups)(C P C' + Psi)^-1 (C P A' + Ups')

    and derive the innovation covariance Phi = C P C' + Psi and the Kalman gain
    K = (A P C' + Ups) Phi^-1.

    Both methods evaluate the Riccati difference recursion: "iteration" steps it one at a
    time from P = Xi, "doubling" jumps to iterate 2^k, which keeps convergence fast when the
    closed loop has eigenvalues on the unit circle.  "iteration" refuses such critical
    equations, its error decays only like 1/k there.

    Args:
        a: L x L state transition
        c: M x L observation matrix
        xi: L x L state noise covariance (symmetric PSD)
        psi: M x M observation noise covariance (symmetric PD)
        ups: L x M state/observation noise cross covariance
        method: "doubling" (default) or "iteration"

    Returns:
        a DareSolution (p, k, phi)

    Raises:
        SingularityError if Psi or C P C' + Psi is numerically singular
        ConvergenceError if the iteration cap is hit or the residual check fails, or if
            method is "iteration" and the DARE is critical
        NonStabilizingError if spectral_radius(A - K C) exceeds 1
    """
    if method not in DARE_METHODS:
        raise ParameterError(f"unknown DARE method {method}, expected one of {DARE_METHODS}")
    a, c, xi, psi, ups = _check_dare_inputs(a, c, xi, psi, ups)

    if method == "doubling":
        p = _dare_by_doubling(a, c, xi, psi, ups)
    else:
        p = _dare_by_iteration(a, c, xi, psi, ups)

    phi = symmetrize(c @ p @ c.T + psi)
    k = spd_solve(phi, (a @ p @ c.T + ups).T, "innovation covariance").T

    residual = dare_residual(p, a, c, xi, psi, ups)
    if residual > DARE_RESIDUAL_TOL * (1 + max_abs(p)):
        raise ConvergenceError(f"DARE residual {residual:.3e} exceeds tolerance")

    rho = spectral_radius(a - k @ c)
    if rho > 1 + STABILITY_MARGIN:
        raise NonStabilizingError(f"DARE solution is not stabilizing, spectral radius of A-KC is {rho:.6f}")
    if method == "iteration" and rho >= 1 - STABILITY_MARGIN:
        raise ConvergenceError(f"fixed point iteration stopped on a critical DARE (spectral radius of A-KC is "
                               f"{rho:.9f}), the result is not accurate, use the doubling method")
    if rho >= 1 - STABILITY_MARGIN:
        logger.debug(f"solve_dare: marginally stabilizing solution, spectral radius of A-KC is {rho:.9f}")
    return DareSolution(p, k, phi)
