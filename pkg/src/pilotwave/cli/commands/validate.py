"""
`validate` サブコマンドモジュール。
"""

import argparse

from pilotwave.cli.commands.base_command import BaseCommand
from pilotwave.cli.config import RunConfig
from pilotwave.errors import ExitCode
from pilotwave.output.header import RunHeader


class ValidateCommand(BaseCommand):
    """
    波束と箱の定義ファイルを検証するコマンド。

    粒子数・モード数・質量殻エネルギー・箱の体積を報告する。
    読み込みに失敗すれば例外がそのまま終了コードになる。
    """

    @property
    def name(self) -> str:
        return "validate"

    @property
    def help(self) -> str:
        return "parse a packet (and box) and report its on-shell energies"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("packet", help="packet definition (TOML)")
        parser.add_argument("--box", help="spacetime box definition (TOML)")

    def run(self, args: argparse.Namespace, config: RunConfig) -> ExitCode:
        packet = self.read_packet(config)
        box = self.read_box(config)

        report: dict[str, object] = {
            "particles": packet.n_particles,
            "modes": packet.n_modes,
            "masses": list(packet.masses),
            "energies": packet.energies().tolist(),
        }
        if box is not None:
            box.check_particles(packet.n_particles)
            report["box"] = {
                "dimension": box.dimension,
                "volume": box.volume,
                "one_plus_one": box.is_one_plus_one,
            }

        header = RunHeader.for_files(
            self.name, config.seed, [config.packet_path, config.box_path]
        )
        with self.open_output(config.output_path) as stream:
            self.writer(config, header, stream).write_report(report)
        self.summary(
            f"{self.name}: {packet.n_particles} particle(s), {packet.n_modes} mode(s)"
        )
        return ExitCode.OK
