"""
`ensemble` サブコマンドモジュール。
"""

import argparse

from pilotwave.cli.commands.base_command import BaseCommand
from pilotwave.cli.config import RunConfig
from pilotwave.errors import ExitCode, InvalidParameterError
from pilotwave.output.header import RunHeader
from pilotwave.output.tables import configuration_columns, ensemble_rows
from pilotwave.probability.sampling import sample_ensemble


class EnsembleCommand(BaseCommand):
    """箱の中で |ψ|² に従う配置のアンサンブルを書き出すコマンド。"""

    @property
    def name(self) -> str:
        return "ensemble"

    @property
    def help(self) -> str:
        return "rejection-sample configurations from |psi|^2 over a box"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("packet", help="packet definition (TOML)")
        parser.add_argument("--box", help="spacetime box definition (TOML)")
        parser.add_argument(
            "--count", type=int, default=1000, help="ensemble size (default: 1000)"
        )

    def run(self, args: argparse.Namespace, config: RunConfig) -> ExitCode:
        if args.count < 1:
            raise InvalidParameterError(f"--count must be positive, got {args.count}")
        packet = self.read_packet(config)
        box = self.require_box(config)
        ensemble = sample_ensemble(packet, box, args.count, config.seed, config.threads)

        header = RunHeader.for_files(
            self.name,
            config.seed,
            [config.packet_path, config.box_path],
            [("count", args.count)],
        )
        with self.open_output(config.output_path) as stream:
            self.writer(config, header, stream).write_table(
                configuration_columns(packet.n_particles),
                ensemble_rows(ensemble.points),
            )
        self.summary(
            f"{self.name}: {len(ensemble)} configurations, "
            f"acceptance rate {ensemble.acceptance_rate:.4g}"
        )
        return ExitCode.OK
