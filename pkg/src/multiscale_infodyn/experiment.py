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

"""Running a multiscale experiment on one VAR model, API entrypoint"""

import logging
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import pandas as pd

from multiscale_infodyn import VERSION
from .errors import ParameterError, SchemaError
from .estimator import EstimationSettings, oracle_sweep
from .infodyn import multiscale_sweep
from .linalg import DARE_METHODS
from .model_factory import ModelFactory
from .multiscale import ProcessingMode, check_tau
from .result_exporter import ResultExporter, OUTPUT_FORMATS
from .statespace import check_channel
from .var import VarModel

MEASURE_COLUMNS = ["scale", "mode", "target", "lambda_full", "lambda_own", "lambda_all",
                   "storage_nats", "transfer_nats", "predictive_nats", "storage_bits", "transfer_bits"]
ORACLE_COLUMNS = ["oracle_storage_nats", "oracle_transfer_nats", "storage_abs_dev", "transfer_abs_dev"]

MODE_ORDER = {mode: idx for idx, mode in enumerate(ProcessingMode)}


@dataclass
class ExperimentSpec:
    """
    Definition of an experiment

    Attributes:
        model: the VarModel to analyse
        model_name: preset name or model file path, recorded in the output metadata
        taus: scale factors
        modes: ProcessingMode values to evaluate
        targets: target channels (1-based), None for all channels
        oracle: EstimationSettings to cross check against simulations, None to skip
        oracle_seeds: seeds of the oracle simulations (median over seeds)
        output_path: destination file, None to write csv to stdout
        output_format: csv, json or netcdf
        workers: threads evaluating scales concurrently
        dare_method: doubling or iteration
    """

    model: VarModel
    model_name: str = ""
    taus: list = field(default_factory=lambda: [1])
    modes: list = field(default_factory=lambda: [ProcessingMode.AVG, ProcessingMode.DWS])
    targets: Optional[list] = None
    oracle: Optional[EstimationSettings] = None
    oracle_seeds: list = field(default_factory=list)
    output_path: Optional[str] = None
    output_format: str = "csv"
    workers: int = 1
    dare_method: str = "doubling"

    def validate(self):
        """
        Check the experiment definition against the model

        Returns:
            this spec, with modes converted to ProcessingMode and targets filled in, repeated scales,
            modes and targets dropped (first occurrence kept)
        """
        if not self.taus:
            raise ParameterError("at least one scale factor is required")
        self.taus = list(dict.fromkeys(check_tau(tau) for tau in self.taus))
        if not self.modes:
            raise ParameterError("at least one processing mode is required")
        try:
            self.modes = list(dict.fromkeys(ProcessingMode(mode) for mode in self.modes))
        except ValueError as ex:
            raise ParameterError(str(ex))
        if self.targets is None:
            self.targets = list(range(1, self.model.m + 1))
        self.targets = list(dict.fromkeys(check_channel(j, self.model.m) for j in self.targets))
        if self.output_format not in OUTPUT_FORMATS:
            raise ParameterError(f"unknown output format {self.output_format}")
        if self.dare_method not in DARE_METHODS:
            raise ParameterError(f"unknown DARE method {self.dare_method}")
        if self.workers < 1:
            raise ParameterError(f"workers must be >= 1, got {self.workers}")
        if self.oracle is not None and not self.oracle_seeds:
            self.oracle_seeds = [self.oracle.seed]
        return self

    def to_metadata(self):
        metadata = {
            "model_name": self.model_name,
            "model": ModelFactory.model_to_dict(self.model),
            "taus": self.taus,
            "modes": [str(mode) for mode in self.modes],
            "targets": self.targets,
            "dare_method": self.dare_method,
            "multiscale_infodyn_version": VERSION,
        }
        if self.oracle is not None:
            metadata["oracle"] = {"sample_count": self.oracle.sample_count, "seeds": self.oracle_seeds,
                                  "lag_order": self.oracle.lag_order, "ridge": self.oracle.ridge,
                                  "burn_in": self.oracle.burn_in, "generator": self.oracle.generator}
        return metadata


class ExperimentRunner:
    """
    The main class for running the multiscale analysis of a single model
    """

    def __init__(self, spec):
        """
        Construct an ExperimentRunner

        Args:
            spec: an ExperimentSpec
        """
        self.spec = spec.validate()
        self.logger = logging.getLogger("ExperimentRunner")
        self.table = None
        self.rows = []
        self.failed_rows = 0

    def run(self):
        """
        Evaluate every (scale, mode, target) row, and the oracle columns if requested

        Returns:
            elapsed time in seconds
        """
        start_time = time.time()
        spec = self.spec
        self.logger.info(f"multiscale_infodyn version {VERSION}")
        self.logger.info(f"Model {spec.model_name}: M={spec.model.m} p={spec.model.p}, "
                         f"{len(spec.taus)} scales, modes {','.join(map(str, spec.modes))}")

        rows = []
        for mode in spec.modes:
            rows += multiscale_sweep(spec.model, spec.taus, mode, spec.targets,
                                     workers=spec.workers, method=spec.dare_method)

        oracle = None
        if spec.oracle is not None:
            oracle = oracle_sweep(spec.model, spec.taus, spec.modes, spec.targets, spec.oracle, spec.oracle_seeds)

        self.rows = sorted(rows, key=lambda r: (MODE_ORDER[r.mode], r.tau, r.target))
        records = []
        for row in self.rows:
            record = self.row_record(row)
            if oracle is not None:
                record.update(self.oracle_record(row, oracle.get((row.tau, row.mode, row.target))))
            records.append(record)

        columns = MEASURE_COLUMNS + (ORACLE_COLUMNS if oracle is not None else []) + ["error"]
        self.table = pd.DataFrame.from_records(records, columns=columns)
        self.failed_rows = sum(1 for row in rows if row.error is not None)
        if self.failed_rows:
            self.logger.warning(f"{self.failed_rows} rows failed")
        return time.time() - start_time

    @staticmethod
    def row_record(row):
        record = {"scale": row.tau, "mode": str(row.mode), "target": row.target, "error": ""}
        m = row.measures
        if m is None:
            record["error"] = f"{type(row.error).__name__}: {row.error}"
            for column in MEASURE_COLUMNS[3:]:
                record[column] = np.nan
            return record
        record.update(lambda_full=m.lambda_full, lambda_own=m.lambda_own, lambda_all=m.lambda_all,
                      storage_nats=m.storage, transfer_nats=m.transfer, predictive_nats=m.predictive,
                      storage_bits=m.storage_bits, transfer_bits=m.transfer_bits)
        return record

    @staticmethod
    def oracle_record(row, estimate):
        if estimate is None or row.measures is None:
            return {column: np.nan for column in ORACLE_COLUMNS}
        return {"oracle_storage_nats": estimate.storage,
                "oracle_transfer_nats": estimate.transfer,
                "storage_abs_dev": abs(estimate.storage - row.measures.storage),
                "transfer_abs_dev": abs(estimate.transfer - row.measures.transfer)}

    def report(self):
        """
        Log a readable summary, storage/transfer values within rounding noise below zero are shown as 0

        Returns:
            the logged lines, one per row
        """
        if self.table is None:
            raise SchemaError("run() must be called before report()")
        lines = []
        for row in self.rows:
            prefix = f"{row.mode} tau={row.tau} target={row.target}: "
            if row.measures is None:
                lines.append(prefix + f"{type(row.error).__name__}: {row.error}")
                continue
            m = row.measures.clamped()
            lines.append(prefix + f"S={m.storage:.6f} T={m.transfer:.6f} P={m.predictive:.6f} nats "
                                  f"({m.predictive_bits:.6f} bits)")
        for line in lines:
            self.logger.info(line)
        return lines

    def get_exporter(self):
        return ResultExporter(self.spec.to_metadata())

    def export(self, output_path, output_format="csv", history=""):
        """
        Export the result table

        Args:
            output_path: the path to which the table is written
            output_format: csv, json or netcdf
            history: a string which summarises the processing parameters
        """
        self.logger.info(f"Exporting results to file {output_path}")
        self.get_exporter().export(self.table, output_path, output_format, history=history)
