"""
`check` サブコマンドモジュール。
"""

import argparse
import logging

from pilotwave.checks.base import CheckContext, CheckResult
from pilotwave.checks.registry import ALL_SUITES, CheckRegistry
from pilotwave.cli.commands.base_command import BaseCommand
from pilotwave.cli.config import RunConfig
from pilotwave.defaults import CHECK_SAMPLES, EQUIVARIANCE_COUNT, EQUIVARIANCE_DELTA_S
from pilotwave.errors import ExitCode
from pilotwave.output.header import RunHeader
from pilotwave.output.writers import OutputFormat

logger = logging.getLogger(__name__)


class CheckCommand(BaseCommand):
    """
    不変量検査スイートを実行するコマンド。

    全項目が合格なら終了コード0、1つでも不合格なら1を返す。
    """

    default_format = OutputFormat.JSON

    @property
    def name(self) -> str:
        return "check"

    @property
    def help(self) -> str:
        return "run invariant suites and write a pass/fail report"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("packet", help="packet definition (TOML)")
        parser.add_argument(
            "--box", required=True, help="box the check configurations come from"
        )
        parser.add_argument(
            "--suite",
            choices=[*CheckRegistry().names(), ALL_SUITES],
            default=ALL_SUITES,
        )
        parser.add_argument(
            "--samples",
            type=int,
            default=CHECK_SAMPLES,
            help=f"configurations per pointwise check (default: {CHECK_SAMPLES})",
        )
        parser.add_argument(
            "--equivariance-count",
            type=int,
            default=EQUIVARIANCE_COUNT,
            help=f"statistical test ensemble size (default: {EQUIVARIANCE_COUNT})",
        )
        parser.add_argument(
            "--delta-s",
            type=float,
            default=EQUIVARIANCE_DELTA_S,
            help=f"equivariance flow length (default: {EQUIVARIANCE_DELTA_S})",
        )

    def run(self, args: argparse.Namespace, config: RunConfig) -> ExitCode:
        packet = self.read_packet(config)
        box = self.require_box(config)
        box.check_particles(packet.n_particles)
        context = CheckContext(
            packet,
            box,
            seed=config.seed,
            step=config.step,
            s_span=config.s_span,
            threads=config.threads,
            samples=args.samples,
            equivariance_count=args.equivariance_count,
            delta_s=args.delta_s,
        )

        results: list[CheckResult] = []
        for check in CheckRegistry().select(args.suite):
            logger.info("running suite %s", check.name)
            results += check.run(context)
        passed = all(result.passed for result in results)

        header = RunHeader.for_files(
            self.name,
            config.seed,
            [config.packet_path, config.box_path],
            [
                ("suite", args.suite),
                ("step", config.step),
                ("s_span", config.s_span),
                ("samples", args.samples),
                ("equivariance_count", args.equivariance_count),
                ("delta_s", args.delta_s),
            ],
        )
        report: dict[str, object] = {
            "suite": args.suite,
            "passed": passed,
            "checks": [result.to_dict() for result in results],
        }
        with self.open_output(config.output_path) as stream:
            self.writer(config, header, stream).write_report(report)

        failed = [result.name for result in results if not result.passed]
        if failed:
            self.summary(f"{self.name}: failed {', '.join(failed)}")
            return ExitCode.CHECK_FAILED
        self.summary(f"{self.name}: all {len(results)} checks passed")
        return ExitCode.OK
