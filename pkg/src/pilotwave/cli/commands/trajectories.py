"""
`trajectories` サブコマンドモジュール。
"""

import argparse
import logging
from collections import Counter
from collections.abc import Iterable, Iterator
from enum import StrEnum
from pathlib import Path

import numpy as np

from pilotwave.bohmian.flow import Trajectory, TrajectoryStatus, iter_trajectories
from pilotwave.bohmian.velocity import velocity_many
from pilotwave.cli.commands.base_command import BaseCommand
from pilotwave.cli.config import RunConfig
from pilotwave.errors import DegenerateRunError, ExitCode, InvalidParameterError
from pilotwave.output.header import RunHeader
from pilotwave.output.tables import (
    long_rows,
    read_configurations,
    trajectory_columns,
    trajectory_rows,
)
from pilotwave.probability.box import SpacetimeBox
from pilotwave.probability.sampling import sample_ensemble
from pilotwave.spacetime.four_vector import FloatArray
from pilotwave.wavepacket.packet import WavePacket

logger = logging.getLogger(__name__)


class Layout(StrEnum):
    """軌道の書き出し方。"""

    LONG = "long"  # trajectory_id 列付きの1ファイル
    PER_FILE = "per-file"  # 1軌道1ファイル


class TrajectoriesCommand(BaseCommand):
    """
    ボーム軌道を積分して書き出すコマンド。

    初期配置はファイルから読むか、箱の中で |ψ|² からサンプリングする。
    """

    @property
    def name(self) -> str:
        return "trajectories"

    @property
    def help(self) -> str:
        return "integrate Bohmian trajectories from listed or sampled initials"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("packet", help="packet definition (TOML)")
        parser.add_argument("--box", help="spacetime box definition (TOML)")
        parser.add_argument(
            "--count",
            type=int,
            default=None,
            help="number of trajectories (default: 1, or every row of --initial)",
        )
        parser.add_argument(
            "--initial", help="initial configurations (wide CSV); else sample |psi|^2"
        )
        parser.add_argument(
            "--layout",
            choices=[layout.value for layout in Layout],
            default=Layout.LONG.value,
            help="one long-format file, or one file per trajectory in --output",
        )
        parser.add_argument(
            "--halt-outside",
            action="store_true",
            help="halt trajectories that leave the --box",
        )

    def run(self, args: argparse.Namespace, config: RunConfig) -> ExitCode:
        packet = self.read_packet(config)
        box = self.read_box(config)
        if box is not None:
            box.check_particles(packet.n_particles)
        initial_path = None if args.initial is None else Path(args.initial)
        points = self._initial_points(packet, box, initial_path, args.count, config)

        domain = None
        if args.halt_outside:
            domain = self.require_box(config)
        threshold = config.node_factor * packet.amplitude_bound
        if points.shape[0] > 0:
            _, modulus = velocity_many(packet, points)
            if not np.any(modulus > threshold):
                raise DegenerateRunError(
                    f"all {points.shape[0]} initial configurations lie on nodes"
                )

        header = RunHeader.for_files(
            self.name,
            config.seed,
            [config.packet_path, config.box_path, initial_path],
            [
                ("step", config.step),
                ("s_span", config.s_span),
                ("node_factor", config.node_factor),
            ],
        )
        counts: Counter[TrajectoryStatus] = Counter()

        def counted() -> Iterator[Trajectory]:
            # 書き出しながら終了状態を数える
            for trajectory in iter_trajectories(
                packet,
                points,
                config.s_span,
                config.step,
                threshold=threshold,
                domain=domain,
                threads=config.threads,
            ):
                counts[trajectory.status] += 1
                yield trajectory

        if Layout(args.layout) is Layout.PER_FILE:
            self._write_per_file(counted(), packet.n_particles, header, config)
        else:
            with self.open_output(config.output_path) as stream:
                self.writer(config, header, stream).write_table(
                    trajectory_columns(packet.n_particles, long_format=True),
                    long_rows(counted()),
                )

        parts = [f"{status.label}={counts[status]}" for status in TrajectoryStatus]
        total = sum(counts.values())
        self.summary(f"{self.name}: {total} total, " + ", ".join(parts))
        return ExitCode.OK

    def _initial_points(
        self,
        packet: WavePacket,
        box: SpacetimeBox | None,
        initial_path: Path | None,
        count: int | None,
        config: RunConfig,
    ) -> FloatArray:
        """初期配置 (count, n, 4) を用意する。"""
        if count is not None and count < 0:
            raise InvalidParameterError(f"--count must be nonnegative, got {count}")
        n = packet.n_particles
        if initial_path is not None:
            points = read_configurations(initial_path, n)
            return points if count is None else points[:count]
        if count == 0:
            return np.zeros((0, n, 4), dtype=np.float64)
        if box is None:
            raise InvalidParameterError(
                "sampling initial configurations needs --box (or pass --initial)"
            )
        ensemble = sample_ensemble(
            packet, box, 1 if count is None else count, config.seed, config.threads
        )
        logger.info("sampled %d initial configurations", len(ensemble))
        return ensemble.points

    def _write_per_file(
        self,
        trajectories: Iterable[Trajectory],
        n: int,
        header: RunHeader,
        config: RunConfig,
    ) -> None:
        """--output ディレクトリに1軌道1ファイルで書き出す。"""
        if config.output_path is None:
            raise InvalidParameterError("--layout per-file needs an --output directory")
        directory = config.output_path
        directory.mkdir(parents=True, exist_ok=True)
        suffix = config.output_format.value
        for index, trajectory in enumerate(trajectories):
            path = directory / f"trajectory_{index:05d}.{suffix}"
            with self.open_output(path) as stream:
                self.writer(config, header, stream).write_table(
                    trajectory_columns(n, long_format=False),
                    trajectory_rows(trajectory),
                )
