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
Loading VAR models from JSON model files or from the named presets

Model files hold a JSON object {"m": M, "p": p, "A": [p matrices M x M], "Sigma": M x M}.
"""

import json
import os

import numpy as np

from .errors import SchemaError, ModelFileNotFoundError, ParameterError
from .linalg import is_symmetric
from .var import VarModel, validate


def bivariate_model(a1=0.0, b1=1, a2=0.0, b2=1, c1=0.0, d1=1, c2=0.0, d2=1, sigma=None):
    """
    Build the bivariate VAR

        y1_n = a1 y1_{n-b1} + c1 y2_{n-d1} + u1_n
        y2_n = a2 y2_{n-b2} + c2 y1_{n-d2} + u2_n

    with autonomous dynamics of strength a_i at lag b_i and coupling of strength c_i at lag d_i.
    The model order is the largest lag carrying a nonzero coefficient.

    Args:
        sigma: innovation covariance, identity by default

    Returns:
        a VarModel
    """
    terms = [(a1, b1, 0, 0), (c1, d1, 0, 1), (a2, b2, 1, 1), (c2, d2, 1, 0)]
    for value, lag, _, _ in terms:
        if lag < 1:
            raise ParameterError(f"lags must be >= 1, got {lag}")
    p = max([lag for value, lag, _, _ in terms if value != 0] + [1])
    a = np.zeros((p, 2, 2))
    for value, lag, row, col in terms:
        if value != 0:
            a[lag - 1, row, col] += value
    return VarModel(a=a, sigma=np.eye(2) if sigma is None else sigma)


PRESETS = {
    # y1 -> y2 at lag 2, y1 autonomous
    "uni": dict(a1=0.25, b1=1, a2=0.0, c1=0.0, c2=0.5, d2=2),
    # y1 -> y2 at lag 7, y2 -> y1 at lag 3
    "bi": dict(a1=0.25, b1=2, a2=0.25, b2=5, c1=0.75, d1=3, c2=0.5, d2=7),
    # as uni with a strongly autocorrelated driver
    "uni-strong": dict(a1=0.95, b1=1, a2=0.0, c1=0.0, c2=0.5, d2=2),
}


class ModelFactory:

    @staticmethod
    def create_model(model_path=None, preset=None):
        """
        ModelFactory resolves a model file or a preset name to a validated VarModel

        Args:
            model_path: path to a JSON model file
            preset: name of a preset (see PRESETS)

        Returns:
            a validated VarModel
        """
        if (model_path is None) == (preset is None):
            raise ParameterError("specify exactly one of a model file or a preset")
        if preset is not None:
            return ModelFactory.create_preset(preset)
        return ModelFactory.read_model_json(model_path)

    @staticmethod
    def create_preset(name):
        if name not in PRESETS:
            raise ParameterError(f"unknown preset {name}, expected one of {', '.join(sorted(PRESETS))}")
        return validate(bivariate_model(**PRESETS[name]))

    @staticmethod
    def read_model_json(path):
        """
        Read and validate a model file

        Raises:
            ModelFileNotFoundError if the file does not exist
            SchemaError if the content does not follow the model schema
            InstabilityError / CovarianceError if the model is not a stationary VAR
        """
        if not os.path.isfile(path):
            raise ModelFileNotFoundError(f"model file {path} not found")
        with open(path, encoding="utf-8") as f:
            try:
                obj = json.load(f)
            except json.JSONDecodeError as ex:
                raise SchemaError(f"model file {path} is not valid JSON: {ex}")
        return validate(ModelFactory.parse_model(obj))

    @staticmethod
    def parse_model(obj):
        """
        Convert a decoded model JSON object into a VarModel (not yet validated for stationarity)
        """
        if not isinstance(obj, dict):
            raise SchemaError("model must be a JSON object")
        missing = [key for key in ("m", "p", "A", "Sigma") if key not in obj]
        if missing:
            raise SchemaError(f"model is missing keys: {', '.join(missing)}")
        m, p = obj["m"], obj["p"]
        for name, value in (("m", m), ("p", p)):
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise SchemaError(f"{name} must be an integer >= 1, got {value!r}")
        try:
            a = np.array(obj["A"], dtype=np.float64)
            sigma = np.array(obj["Sigma"], dtype=np.float64)
        except (TypeError, ValueError) as ex:
            raise SchemaError(f"A and Sigma must be numeric matrices: {ex}")
        if a.shape != (p, m, m):
            raise SchemaError(f"A must hold {p} matrices of size {m}x{m}, got shape {a.shape}")
        if sigma.shape != (m, m):
            raise SchemaError(f"Sigma must be {m}x{m}, got shape {sigma.shape}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(sigma))):
            raise SchemaError("A and Sigma must be finite")
        if not is_symmetric(sigma):
            raise SchemaError("Sigma is not symmetric")
        return VarModel(a=a, sigma=sigma)

    @staticmethod
    def model_to_dict(model):
        return {"m": model.m, "p": model.p, "A": model.a.tolist(), "Sigma": model.sigma.tolist()}

    @staticmethod
    def write_model_json(model, path):
        with open(path, "w", encoding="utf-8") as f:
            json.dump(ModelFactory.model_to_dict(model), f, indent=2)
            f.write("\n")
