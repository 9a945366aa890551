"""
出力ライターモジュール。

表（軌道・アンサンブル・遷移率）とレポート（検査結果・検証結果）を
CSV または JSON で書き出す。形式ごとの違いはライターに閉じ込める。
"""

import csv
import json
from abc import ABC, abstractmethod
from collections.abc import Iterable, Sequence
from enum import StrEnum
from typing import TextIO

from pilotwave.output.header import RunHeader

Row = Sequence[object]


class OutputFormat(StrEnum):
    """出力形式。"""

    CSV = "csv"
    JSON = "json"


class BaseWriter(ABC):
    """
    ライターの抽象基底クラス。

    Attributes:
        header (RunHeader): ファイル先頭に書くヘッダー
        stream (TextIO): 書き込み先
    """

    def __init__(self, header: RunHeader, stream: TextIO) -> None:
        self.header = header
        self.stream = stream

    @abstractmethod
    def write_table(
        self,
        columns: Sequence[str],
        rows: Iterable[Row],
        notes: Sequence[str] = (),
    ) -> None:
        """
        ヘッダーに続けて表を書く。

        Parameters:
            columns (Sequence[str]): 列名
            rows (Iterable[Row]): 行
            notes (Sequence[str]): 表に付ける注記（例: ``T=100.0``）
        """
        pass

    @abstractmethod
    def write_report(self, report: dict[str, object]) -> None:
        """ヘッダーに続けてレポートを書く。"""
        pass


class CsvWriter(BaseWriter):
    """`#` で始まるコメント行をヘッダーにするCSVライター。"""

    def _comments(self, notes: Sequence[str]) -> None:
        for line in [*self.header.lines(), *notes]:
            self.stream.write(f"# {line}\n")

    def write_table(
        self,
        columns: Sequence[str],
        rows: Iterable[Row],
        notes: Sequence[str] = (),
    ) -> None:
        self._comments(notes)
        writer = csv.writer(self.stream, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(rows)

    def write_report(self, report: dict[str, object]) -> None:
        # レポートは key,value の2列に平坦化する
        self.write_table(["key", "value"], _flatten(report))


class JsonWriter(BaseWriter):
    """先頭に `header` オブジェクトを持つJSONライター。"""

    def _dump(self, body: dict[str, object]) -> None:
        document = {"header": self.header.as_dict(), **body}
        json.dump(document, self.stream, indent=2, allow_nan=True)
        self.stream.write("\n")

    def write_table(
        self,
        columns: Sequence[str],
        rows: Iterable[Row],
        notes: Sequence[str] = (),
    ) -> None:
        self._dump(
            {
                "notes": list(notes),
                "columns": list(columns),
                "rows": [list(row) for row in rows],
            }
        )

    def write_report(self, report: dict[str, object]) -> None:
        self._dump(report)


def _flatten(value: object, prefix: str = "") -> list[tuple[str, object]]:
    if isinstance(value, dict):
        items: list[tuple[str, object]] = []
        for key, item in value.items():
            items += _flatten(item, f"{prefix}.{key}" if prefix else str(key))
        return items
    if isinstance(value, list):
        items = []
        for index, item in enumerate(value):
            items += _flatten(item, f"{prefix}[{index}]")
        return items
    return [(prefix, value)]


WRITERS: dict[OutputFormat, type[BaseWriter]] = {
    OutputFormat.CSV: CsvWriter,
    OutputFormat.JSON: JsonWriter,
}


def make_writer(
    output_format: OutputFormat | str, header: RunHeader, stream: TextIO
) -> BaseWriter:
    """
    形式名からライターを作る。

    Raises:
        ValueError: 未知の形式の場合
    """
    try:
        writer_class = WRITERS[OutputFormat(output_format)]
    except ValueError as exc:
        raise ValueError(f"Unknown output format: {output_format}") from exc
    return writer_class(header, stream)
