"""
出力モジュール。

再現可能なヘッダー付きのCSV/JSON書き出しを提供する。
"""

from pilotwave.output.header import RunHeader, file_digest
from pilotwave.output.tables import (
    configuration_columns,
    ensemble_rows,
    long_rows,
    read_configurations,
    trajectory_columns,
    trajectory_rows,
)
from pilotwave.output.writers import (
    BaseWriter,
    CsvWriter,
    JsonWriter,
    OutputFormat,
    make_writer,
)

__all__ = [
    "BaseWriter",
    "CsvWriter",
    "JsonWriter",
    "OutputFormat",
    "RunHeader",
    "configuration_columns",
    "ensemble_rows",
    "file_digest",
    "long_rows",
    "make_writer",
    "read_configurations",
    "trajectory_columns",
    "trajectory_rows",
]
