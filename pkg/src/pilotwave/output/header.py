"""
出力ヘッダーモジュール。

全ての出力ファイルの先頭に、ツールのバージョン・シード・入力ファイルの
SHA-256 を書く。時刻は書かないので、同じ入力からは同じバイト列が得られる。
"""

import hashlib
from collections.abc import Iterable
from dataclasses import dataclass, field
from pathlib import Path

from pilotwave import __version__
from pilotwave.errors import PacketFormatError

TOOL_NAME = "pilotwave"


def file_digest(path: str | Path) -> str:
    """ファイルの SHA-256 を16進文字列で返す。"""
    try:
        with open(path, "rb") as handle:
            return hashlib.file_digest(handle, "sha256").hexdigest()
    except OSError as exc:
        raise PacketFormatError(f"cannot read file: {exc.strerror}", str(path)) from exc


@dataclass(frozen=True)
class RunHeader:
    """
    出力ファイルのヘッダー。

    Attributes:
        command (str): サブコマンド名
        seed (int): シード（乱数を使わないコマンドでも記録する）
        inputs (tuple[tuple[str, str], ...]): (ファイル名, SHA-256) の組
        settings (tuple[tuple[str, str], ...]): 結果に影響する設定
        version (str): ツールのバージョン
    """

    command: str
    seed: int
    inputs: tuple[tuple[str, str], ...] = ()
    settings: tuple[tuple[str, str], ...] = ()
    version: str = field(default=__version__)

    @classmethod
    def for_files(
        cls,
        command: str,
        seed: int,
        paths: Iterable[str | Path | None],
        settings: Iterable[tuple[str, object]] = (),
    ) -> "RunHeader":
        """入力ファイルのダイジェストを計算してヘッダーを作る。"""
        inputs = tuple(
            (str(path), file_digest(path)) for path in paths if path is not None
        )
        return cls(
            command,
            seed,
            inputs,
            tuple((key, repr(value)) for key, value in settings),
        )

    def lines(self) -> list[str]:
        """`key: value` 形式の行。"""
        result = [
            f"tool: {TOOL_NAME} {self.version}",
            f"command: {self.command}",
            f"seed: {self.seed}",
        ]
        result += [f"input: {name} sha256={digest}" for name, digest in self.inputs]
        result += [f"{key}: {value}" for key, value in self.settings]
        return result

    def as_dict(self) -> dict[str, object]:
        """JSON用の辞書。"""
        return {
            "tool": TOOL_NAME,
            "version": self.version,
            "command": self.command,
            "seed": self.seed,
            "inputs": [
                {"path": name, "sha256": digest} for name, digest in self.inputs
            ],
            "settings": dict(self.settings),
        }
