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
routines for writing result tables to csv, json and netcdf4
"""

import datetime
import getpass
import json
import logging
import math
import os
import tempfile

import netCDF4
import numpy as np

from multiscale_infodyn import VERSION as MULTISCALE_INFODYN_VERSION
from .errors import ParameterError

# YYYY-MM-DDThh:mm:ss<tz>
DATEFORMAT = "%Y-%m-%dT%H:%M:%S%z"

OUTPUT_FORMATS = ("csv", "json", "netcdf")

CSV_FLOAT_FORMAT = "%.12g"


def date_format(dt):
    if dt is None:
        return None
    return dt.strftime(DATEFORMAT)


def dumps_canonical(obj):
    """
    Serialize to JSON so that loading and serializing again reproduces the same text
    """
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def to_csv_text(table):
    return table.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def _plain(value):
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return None if math.isnan(value) else value
    if value == "":
        return None
    return value


def table_records(table):
    return [{column: _plain(value) for column, value in zip(table.columns, row)}
            for row in table.itertuples(index=False, name=None)]


def _atomic_write(to_path, writer):
    folder = os.path.dirname(os.path.abspath(to_path))
    fd, tmp_path = tempfile.mkstemp(dir=folder, suffix=".tmp")
    os.close(fd)
    try:
        writer(tmp_path)
        os.replace(tmp_path, to_path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise


class ResultExporter:

    """Handle the export of sweep result tables"""

    def __init__(self, metadata):
        """
        Construct an exporter instance

        Args:
            metadata: dictionary describing the experiment (model, scales, modes, oracle settings)
        """
        self.metadata = metadata
        self.logger = logging.getLogger("ResultExporter")

    def export(self, table, to_path, output_format="csv", history=""):
        """
        Export a result table, the file only appears once it is completely written

        Args:
            table: pandas.DataFrame with one row per (scale, mode, target)
            to_path: destination path
            output_format: one of csv, json, netcdf
            history: string summarising the processing parameters (netcdf only)
        """
        if output_format not in OUTPUT_FORMATS:
            raise ParameterError(f"unknown output format {output_format}, expected one of {OUTPUT_FORMATS}")
        self.logger.info(f"Starting {output_format} export to {to_path}")
        if output_format == "csv":
            text = to_csv_text(table)
            _atomic_write(to_path, lambda path: self.write_text(path, text))
        elif output_format == "json":
            text = self.to_json_text(table)
            _atomic_write(to_path, lambda path: self.write_text(path, text))
        else:
            dataset = self.to_dataset(table, history)
            _atomic_write(to_path, lambda path: dataset.to_netcdf(path))
        self.logger.info(f"Export complete to {to_path}")

    @staticmethod
    def write_text(path, text):
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)

    def to_json_text(self, table):
        return dumps_canonical({"metadata": self.metadata, "rows": table_records(table)})

    def to_dataset(self, table, history=""):
        """
        Convert the table to an xarray Dataset over dimensions (mode, scale, target)
        """
        numeric = table.drop(columns=["error"]).set_index(["mode", "scale", "target"])
        dataset = numeric.to_xarray()

        dataset.attrs["title"] = "Multiscale information storage and transfer"
        dataset.attrs["summary"] = "Analytic information dynamics of a linear Gaussian VAR process " \
                                   "after averaging (avg) and averaging plus downsampling (dws)"
        dataset.attrs["Conventions"] = "ACDD-1.3"
        dataset.attrs["history"] = history
        dataset.attrs["multiscale_infodyn_version"] = MULTISCALE_INFODYN_VERSION
        dataset.attrs["netcdf_version_id"] = netCDF4.getlibversion()
        dataset.attrs["date_created"] = date_format(datetime.datetime.now(datetime.timezone.utc))
        dataset.attrs["experiment"] = json.dumps(self.metadata, sort_keys=True)
        dataset.attrs["failed_rows"] = np.int32((table["error"] != "").sum())

        username = "?"
        try:
            username = getpass.getuser()
        except Exception:
            pass
        dataset.attrs["creator_name"] = username

        for name in dataset.data_vars:
            if name.endswith("_nats"):
                dataset[name].attrs["units"] = "nats"
            elif name.endswith("_bits"):
                dataset[name].attrs["units"] = "bits"
        return dataset
