"""
`rate` サブコマンドモジュール。
"""

import argparse
import math

from pilotwave.cli.commands.base_command import BaseCommand
from pilotwave.cli.config import RunConfig
from pilotwave.defaults import RATE_POINTS_PER_PANEL
from pilotwave.errors import ExitCode
from pilotwave.output.header import RunHeader
from pilotwave.transition.rate import rate_integral, rate_profile


class RateCommand(BaseCommand):
    """
    有限時間の遷移率 |A_T|²/T を書き出すコマンド。

    ΔE について積分した値を 2π と比べて要約に出す。
    """

    @property
    def name(self) -> str:
        return "rate"

    @property
    def help(self) -> str:
        return "tabulate the finite-time transition rate and its integral"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument(
            "--cutoff", type=float, required=True, help="time cutoff T (> 0)"
        )
        parser.add_argument(
            "--halfwidth",
            type=float,
            required=True,
            help="half width H of the energy window (at least 2*pi/T)",
        )
        parser.add_argument(
            "--resolution",
            type=int,
            default=RATE_POINTS_PER_PANEL,
            help="Gauss-Legendre points per panel for the integral",
        )
        parser.add_argument(
            "--grid-points",
            type=int,
            default=2001,
            help="tabulated energy differences (default: 2001)",
        )

    def run(self, args: argparse.Namespace, config: RunConfig) -> ExitCode:
        profile = rate_profile(args.cutoff, args.halfwidth, args.grid_points)
        integral = rate_integral(args.cutoff, args.halfwidth, args.resolution)
        deviation = (integral - 2.0 * math.pi) / (2.0 * math.pi)

        header = RunHeader.for_files(
            self.name,
            config.seed,
            [],
            [
                ("halfwidth", args.halfwidth),
                ("resolution", args.resolution),
                ("grid_points", args.grid_points),
            ],
        )
        with self.open_output(config.output_path) as stream:
            self.writer(config, header, stream).write_table(
                ["delta_E", "rate"],
                profile.rows(),
                notes=[f"T={profile.cutoff!r}"],
            )
        self.summary(
            f"{self.name}: integral={integral!r} 2pi={2.0 * math.pi!r} "
            f"relative_deviation={deviation:.3e}"
        )
        return ExitCode.OK
