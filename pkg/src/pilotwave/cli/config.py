"""
実行設定モジュール。

コマンドライン引数と環境変数から、検証済みの RunConfig を作る。
"""

import argparse
import math
import os
from dataclasses import dataclass
from pathlib import Path

from pilotwave.defaults import NODE_THRESHOLD_FACTOR, S_SPAN, STEP, THREADS_ENV
from pilotwave.errors import InvalidParameterError, PacketFormatError
from pilotwave.output.writers import OutputFormat


def resolve_threads(flag: int | None) -> int:
    """
    スレッド数を決める（フラグ → 環境変数 → 1 の順）。

    スレッド数は速度だけに影響し、結果には影響しない。
    """
    if flag is not None:
        value = flag
    else:
        raw = os.environ.get(THREADS_ENV, "1")
        try:
            value = int(raw)
        except ValueError as exc:
            raise InvalidParameterError(
                f"{THREADS_ENV} must be an integer, got {raw!r}"
            ) from exc
    if value < 1:
        raise InvalidParameterError(f"thread count must be at least 1, got {value}")
    return value


@dataclass(frozen=True)
class RunConfig:
    """
    1回の実行の設定。

    Attributes:
        packet_path (Path | None): 波束定義ファイル
        box_path (Path | None): 箱定義ファイル
        seed (int): シード
        step (float): 積分ステップ
        s_span (tuple[float, float]): 軌道のパラメータ区間
        output_path (Path | None): 出力先（None なら標準出力）
        output_format (OutputFormat): 出力形式
        threads (int): スレッド数
        node_factor (float): ノードしきい値の係数
    """

    packet_path: Path | None = None
    box_path: Path | None = None
    seed: int = 0
    step: float = STEP
    s_span: tuple[float, float] = S_SPAN
    output_path: Path | None = None
    output_format: OutputFormat = OutputFormat.CSV
    threads: int = 1
    node_factor: float = NODE_THRESHOLD_FACTOR

    def __post_init__(self) -> None:
        if not (self.step > 0.0 and math.isfinite(self.step)):
            raise InvalidParameterError(f"--step must be positive, got {self.step}")
        s0, s1 = self.s_span
        if not (math.isfinite(s0) and math.isfinite(s1) and s1 >= s0):
            raise InvalidParameterError(f"--s-span must be ordered, got {self.s_span}")
        if self.seed < 0:
            raise InvalidParameterError(f"--seed must be nonnegative, got {self.seed}")
        if not self.node_factor >= 0.0:
            raise InvalidParameterError(
                f"--node-factor must be nonnegative, got {self.node_factor}"
            )
        for path in (self.packet_path, self.box_path):
            if path is not None and not path.is_file():
                raise PacketFormatError("no such file", str(path))

    @classmethod
    def from_args(
        cls, args: argparse.Namespace, default_format: OutputFormat
    ) -> "RunConfig":
        """解析済みの引数から設定を作る。"""
        packet = getattr(args, "packet", None)
        box = getattr(args, "box", None)
        return cls(
            packet_path=None if packet is None else Path(packet),
            box_path=None if box is None else Path(box),
            seed=args.seed,
            step=args.step,
            s_span=(args.s_span[0], args.s_span[1]),
            output_path=None if args.output in (None, "-") else Path(args.output),
            output_format=(
                default_format if args.format is None else OutputFormat(args.format)
            ),
            threads=resolve_threads(args.threads),
            node_factor=args.node_factor,
        )
