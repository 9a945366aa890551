"""
サブコマンドの基底クラスモジュール。

全てのサブコマンドが継承する抽象基底クラスを定義する。
"""

import argparse
from abc import ABC, abstractmethod
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import TYPE_CHECKING, TextIO

from pilotwave.cli.config import RunConfig
from pilotwave.errors import ExitCode, InvalidParameterError
from pilotwave.output.header import RunHeader
from pilotwave.output.writers import BaseWriter, OutputFormat, make_writer
from pilotwave.probability.box import SpacetimeBox, load_box
from pilotwave.wavepacket.loader import load_packet
from pilotwave.wavepacket.packet import WavePacket

if TYPE_CHECKING:
    from pilotwave.cli.app import App


class BaseCommand(ABC):
    """
    サブコマンドの抽象基底クラス。

    コマンドパターンを実装し、各サブコマンドの引数と処理をカプセル化する。

    Attributes:
        app (App): 親アプリケーションへの参照
    """

    # 出力形式を指定しなかったときの形式
    default_format = OutputFormat.CSV

    def __init__(self, app: "App") -> None:
        """
        コマンドを初期化する。

        Parameters:
            app (App): 親アプリケーション
        """
        self.app = app

    @property
    @abstractmethod
    def name(self) -> str:
        """サブコマンド名。"""
        pass

    @property
    @abstractmethod
    def help(self) -> str:
        """`--help` に表示する1行の説明。"""
        pass

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        """
        サブコマンド固有の引数を追加する。

        サブクラスでオーバーライド可能。
        """
        pass

    @abstractmethod
    def run(self, args: argparse.Namespace, config: RunConfig) -> ExitCode:
        """
        サブコマンドを実行する。

        Parameters:
            args (argparse.Namespace): 解析済みの引数
            config (RunConfig): 検証済みの設定

        Returns:
            ExitCode: 終了コード
        """
        pass

    # ============
    # 共通処理
    # ============

    def read_packet(self, config: RunConfig) -> WavePacket:
        """設定の波束ファイルを読み込む。"""
        if config.packet_path is None:
            raise InvalidParameterError(f"{self.name} needs a packet file")
        return load_packet(config.packet_path)

    def read_box(
        self, config: RunConfig, required: bool = False
    ) -> SpacetimeBox | None:
        """設定の箱ファイルを読み込む（無ければ None）。"""
        if config.box_path is None:
            if required:
                raise InvalidParameterError(f"{self.name} needs --box")
            return None
        return load_box(config.box_path)

    def require_box(self, config: RunConfig) -> SpacetimeBox:
        """箱ファイルを必須として読み込む。"""
        box = self.read_box(config, required=True)
        assert box is not None
        return box

    @contextmanager
    def open_output(self, path: Path | None) -> Iterator[TextIO]:
        """出力先を開く（None なら標準出力）。"""
        if path is None:
            yield self.app.stdout
            return
        with open(path, "w", encoding="utf-8", newline="") as handle:
            yield handle

    def writer(
        self, config: RunConfig, header: RunHeader, stream: TextIO
    ) -> BaseWriter:
        """設定の形式のライターを作る。"""
        return make_writer(config.output_format, header, stream)

    def summary(self, message: str) -> None:
        """要約を標準エラーに書く（標準出力は結果専用）。"""
        print(message, file=self.app.stderr)
