"""
表の列構成モジュール。

アンサンブルは1行1配置の横長形式 `t1,x1,y1,z1,…,tn,xn,yn,zn`、
軌道は `s,t1,…,zn,status` で、複数の軌道をまとめるときは先頭に
`trajectory_id` 列を付ける。
"""

import csv
from collections.abc import Iterable, Iterator
from pathlib import Path

import numpy as np

from pilotwave.bohmian.flow import Trajectory
from pilotwave.errors import PacketFormatError
from pilotwave.probability.box import AXIS_NAMES
from pilotwave.spacetime.four_vector import FloatArray

Row = list[object]


def configuration_columns(n: int) -> list[str]:
    """`t1,x1,y1,z1,…` の列名。"""
    return [f"{axis}{a + 1}" for a in range(n) for axis in AXIS_NAMES]


def ensemble_rows(points: FloatArray) -> Iterator[Row]:
    """(N, n, 4) の配置を横長の行にする。"""
    for row in np.asarray(points).reshape(points.shape[0], -1):
        yield [float(v) for v in row]


def trajectory_columns(n: int, long_format: bool) -> list[str]:
    """軌道CSVの列名。"""
    columns = ["s", *configuration_columns(n), "status"]
    return ["trajectory_id", *columns] if long_format else columns


def trajectory_rows(
    trajectory: Trajectory, trajectory_id: int | None = None
) -> Iterator[Row]:
    """1本の軌道の行。trajectory_id を与えると先頭列に付ける。"""
    flat = trajectory.states.reshape(len(trajectory), -1)
    label = trajectory.status.label
    for s, state in zip(trajectory.s_values, flat, strict=True):
        row: Row = [float(s), *(float(v) for v in state), label]
        yield row if trajectory_id is None else [trajectory_id, *row]


def long_rows(trajectories: Iterable[Trajectory]) -> Iterator[Row]:
    """複数の軌道を1つの表にまとめた行。"""
    for index, trajectory in enumerate(trajectories):
        yield from trajectory_rows(trajectory, index)


def read_configurations(path: str | Path, n: int) -> FloatArray:
    """
    横長形式のCSVから初期配置を読む。`#` で始まる行は無視する。

    Returns:
        FloatArray: 形状 (N, n, 4)

    Raises:
        PacketFormatError: 読めない、列が合わない、数値でない場合
    """
    expected = configuration_columns(n)
    try:
        with open(path, encoding="utf-8", newline="") as handle:
            lines = [(i + 1, line) for i, line in enumerate(handle)]
    except OSError as exc:
        raise PacketFormatError(f"cannot read file: {exc.strerror}", str(path)) from exc
    data = [(number, line) for number, line in lines if not line.startswith("#")]
    if not data:
        raise PacketFormatError("missing column header", str(path))
    records = list(csv.reader(line for _, line in data))
    header_line = data[0][0]
    if [c.strip() for c in records[0]] != expected:
        raise PacketFormatError(
            f"expected columns {','.join(expected)}", str(path), line=header_line
        )
    rows = []
    for (number, _), record in zip(data[1:], records[1:], strict=True):
        if not record:
            continue
        if len(record) != len(expected):
            raise PacketFormatError(
                f"expected {len(expected)} values, got {len(record)}",
                str(path),
                line=number,
            )
        try:
            rows.append([float(value) for value in record])
        except ValueError as exc:
            raise PacketFormatError(str(exc), str(path), line=number) from exc
    values = np.array(rows, dtype=np.float64).reshape(len(rows), n, 4)
    if not np.all(np.isfinite(values)):
        raise PacketFormatError("configurations must be finite", str(path))
    return values
