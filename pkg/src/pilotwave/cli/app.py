"""
コマンドラインアプリケーションモジュール。

サブコマンドの登録、引数の解析、例外から終了コードへの変換を担当する。
"""

import argparse
import logging
import sys
from collections.abc import Sequence
from typing import TextIO

from pilotwave import __version__
from pilotwave.cli.commands.base_command import BaseCommand
from pilotwave.cli.commands.check import CheckCommand
from pilotwave.cli.commands.ensemble import EnsembleCommand
from pilotwave.cli.commands.rate import RateCommand
from pilotwave.cli.commands.trajectories import TrajectoriesCommand
from pilotwave.cli.commands.validate import ValidateCommand
from pilotwave.cli.config import RunConfig
from pilotwave.defaults import NODE_THRESHOLD_FACTOR, S_SPAN, STEP, THREADS_ENV
from pilotwave.errors import PilotWaveError
from pilotwave.output.header import TOOL_NAME
from pilotwave.output.writers import OutputFormat

logger = logging.getLogger(__name__)

# -v の回数からログレベルへ
LOG_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


class App:
    """
    メインアプリケーションクラス。

    コマンドパターンを使用して各サブコマンドを管理する。
    ライブラリが送出した例外は、ここで1行の診断と終了コードに変換する。

    Attributes:
        commands (dict[str, BaseCommand]): コマンド名からコマンドへのマッピング
        parser (argparse.ArgumentParser): 引数パーサー
    """

    def __init__(
        self, stdout: TextIO | None = None, stderr: TextIO | None = None
    ) -> None:
        """
        アプリケーションを初期化する。

        Parameters:
            stdout (TextIO | None): 結果の出力先（None なら sys.stdout）
            stderr (TextIO | None): 診断と要約の出力先（None なら sys.stderr）
        """
        self._stdout = stdout
        self._stderr = stderr

        # コマンドを登録
        self.commands: dict[str, BaseCommand] = {}
        self._register_commands()

        self.parser = self._build_parser()

    @property
    def stdout(self) -> TextIO:
        return self._stdout if self._stdout is not None else sys.stdout

    @property
    def stderr(self) -> TextIO:
        return self._stderr if self._stderr is not None else sys.stderr

    def _register_commands(self) -> None:
        """全てのサブコマンドを登録する。"""
        for command in (
            ValidateCommand(self),
            TrajectoriesCommand(self),
            EnsembleCommand(self),
            CheckCommand(self),
            RateCommand(self),
        ):
            self.commands[command.name] = command

    def get_command(self, name: str) -> BaseCommand:
        """
        名前からコマンドを取得する。

        Raises:
            ValueError: 指定されたコマンド名が存在しない場合
        """
        if name not in self.commands:
            raise ValueError(f"Unknown command: {name}")
        return self.commands[name]

    def _build_parser(self) -> argparse.ArgumentParser:
        """全コマンド共通のフラグを持つパーサーを作る。"""
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--seed", type=int, default=0, help="RNG seed")
        common.add_argument(
            "--step",
            type=float,
            default=STEP,
            help=f"integrator step (default: {STEP})",
        )
        common.add_argument(
            "--s-span",
            type=float,
            nargs=2,
            metavar=("S0", "S1"),
            default=list(S_SPAN),
            help="parameter interval of each trajectory",
        )
        common.add_argument(
            "--node-factor",
            type=float,
            default=NODE_THRESHOLD_FACTOR,
            help="node threshold as a multiple of sum |c_k|",
        )
        common.add_argument(
            "--format",
            choices=[fmt.value for fmt in OutputFormat],
            default=None,
            help="output format (default depends on the command)",
        )
        common.add_argument("--output", "-o", help="output path (default: stdout)")
        common.add_argument(
            "--threads",
            type=int,
            default=None,
            help=f"worker threads (default: ${THREADS_ENV} or 1)",
        )
        common.add_argument(
            "-v", "--verbose", action="count", default=0, help="more log output"
        )

        parser = argparse.ArgumentParser(
            prog=TOOL_NAME,
            description="Relativistic pilot-wave engine for Klein-Gordon packets.",
        )
        parser.add_argument(
            "--version", action="version", version=f"{TOOL_NAME} {__version__}"
        )
        subparsers = parser.add_subparsers(dest="command", required=True)
        for name, command in self.commands.items():
            sub = subparsers.add_parser(name, parents=[common], help=command.help)
            command.add_arguments(sub)
        return parser

    def _configure_logging(self, verbosity: int) -> None:
        level = LOG_LEVELS[min(verbosity, len(LOG_LEVELS) - 1)]
        logging.basicConfig(
            level=level,
            format="%(levelname)s %(name)s: %(message)s",
            stream=self.stderr,
            force=True,
        )

    def run(self, argv: Sequence[str] | None = None) -> int:
        """
        引数を解析してサブコマンドを実行する。

        Parameters:
            argv (Sequence[str] | None): 引数（None なら sys.argv[1:]）

        Returns:
            int: 終了コード
        """
        args = self.parser.parse_args(argv)
        self._configure_logging(args.verbose)
        command = self.get_command(args.command)
        try:
            config = RunConfig.from_args(args, command.default_format)
            return int(command.run(args, config))
        except PilotWaveError as exc:
            logger.debug("%s failed", command.name, exc_info=True)
            print(f"{TOOL_NAME} {command.name}: error: {exc}", file=self.stderr)
            return int(exc.exit_code)


def main(argv: Sequence[str] | None = None) -> int:
    """コンソールスクリプトのエントリーポイント。"""
    return App().run(argv)
