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
Exceptions raised by the solvers, the model layer and the command line front end.

Each exception class carries the process exit code that run_multiscale_infodyn
reports when the exception aborts a run.
"""


class InfoDynError(Exception):
    """Base class for all errors raised by multiscale_infodyn"""

    exit_code = 1

    def to_dict(self):
        """
        Get a machine readable description of this error

        Returns:
            dict with keys error, message and exit_code
        """
        return {"error": type(self).__name__, "message": str(self), "exit_code": self.exit_code}


class ParameterError(InfoDynError):
    """An argument is outside its admissible range (for example a scale factor below 1)"""
    exit_code = 2


class ChannelIndexError(ParameterError):
    """A channel index is outside 1..M"""


class ModelFileNotFoundError(InfoDynError):
    exit_code = 3


class SchemaError(InfoDynError):
    """A model file or experiment definition does not follow the expected schema"""
    exit_code = 4


class DimensionError(SchemaError):
    """Matrix shapes are not conformal"""


class CovarianceError(SchemaError):
    """A covariance-role matrix is not symmetric, not PSD or not PD"""


class SizeError(ParameterError):
    """A state-space embedding would exceed the supported state dimension"""


class InstabilityError(InfoDynError):
    """A transition matrix has spectral radius >= 1"""
    exit_code = 5

    def __init__(self, message, spectral_radius=None):
        super().__init__(message)
        self.spectral_radius = spectral_radius

    def to_dict(self):
        d = super().to_dict()
        d["spectral_radius"] = self.spectral_radius
        return d


class SolverError(InfoDynError):
    exit_code = 6


class ConvergenceError(SolverError):
    """An iterative solver hit its iteration cap or missed its residual tolerance"""


class SingularityError(SolverError):
    """A matrix that must be inverted is numerically singular"""


class NonStabilizingError(SolverError):
    """The Riccati solution does not stabilize the closed loop matrix A-KC"""


class DegeneracyError(SolverError):
    """A variance that must be positive came out non-positive"""


class EstimationError(InfoDynError):
    exit_code = 7


class LengthError(EstimationError):
    """A time series is too short for the requested operation"""


class ConditioningError(EstimationError):
    """A regression design matrix is rank deficient"""
