"""
不変量検査の基底クラスモジュール。

全ての検査スイートが継承する抽象基底クラスと、検査の入力・結果を定義する。
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from pilotwave.defaults import (
    CHECK_SAMPLES,
    EQUIVARIANCE_COUNT,
    EQUIVARIANCE_DELTA_S,
    MIN_EVALUATED_FRACTION,
    S_SPAN,
    STEP,
)
from pilotwave.errors import InconclusiveError
from pilotwave.probability.box import SpacetimeBox
from pilotwave.probability.rng import StreamPurpose, stream
from pilotwave.spacetime.four_vector import FloatArray
from pilotwave.wavepacket.packet import WavePacket

# 検査用の配置は |ψ| がこれ × Σ|c_k| を超える点から選ぶ
CHECK_NODE_CLEARANCE = 1e-3


@dataclass(frozen=True)
class CheckContext:
    """
    検査の入力。

    Attributes:
        packet (WavePacket): 波束
        box (SpacetimeBox): 配置を選ぶ箱
        seed (int): シード
        step (float): 軌道積分のステップ
        s_span (tuple[float, float]): 軌道のパラメータ区間
        threads (int): スレッド数
        samples (int): KG・連続の式などで調べる配置数
        equivariance_count (int): 等変性検定のアンサンブルサイズ
        delta_s (float): 等変性検定で流す幅
    """

    packet: WavePacket
    box: SpacetimeBox
    seed: int = 0
    step: float = STEP
    s_span: tuple[float, float] = S_SPAN
    threads: int = 1
    samples: int = CHECK_SAMPLES
    equivariance_count: int = EQUIVARIANCE_COUNT
    delta_s: float = EQUIVARIANCE_DELTA_S

    def sample_points(self, index: int = 0) -> FloatArray:
        """
        ノードから離れた配置を samples 個返す（形状 (samples, n, 4)）。

        同じ (seed, index) なら常に同じ配置になる。
        """
        rng = stream(self.seed, index, StreamPurpose.CHECKS)
        limit = CHECK_NODE_CLEARANCE * self.packet.amplitude_bound
        chosen: list[FloatArray] = []
        found = 0
        for _ in range(100):
            candidates = self.box.uniform(rng, 4 * self.samples)
            keep = candidates[np.abs(self.packet.evaluate_many(candidates)) > limit]
            chosen.append(keep)
            found += keep.shape[0]
            if found >= self.samples:
                break
        if found == 0:
            raise InconclusiveError("no configurations away from nodes in the box")
        return np.concatenate(chosen)[: self.samples]


def require_evaluated(suite: str, evaluated: int, attempted: int) -> None:
    """
    ノードで飛ばした配置が多すぎないかを確かめる。

    Raises:
        InconclusiveError: 評価できた配置が attempted の MIN_EVALUATED_FRACTION 未満の場合
    """
    if evaluated == 0 or evaluated < MIN_EVALUATED_FRACTION * attempted:
        raise InconclusiveError(
            f"{suite}: only {evaluated} of {attempted} configurations could be "
            "evaluated away from nodes"
        )


@dataclass(frozen=True, slots=True)
class CheckResult:
    """
    1つの検査項目の結果。

    Attributes:
        name (str): 項目名（例: ``kg.residual``）
        measured (float): 測定値
        tolerance (float | None): 許容値（情報のみの項目では None）
        passed (bool): 合格なら True
        detail (str): 補足
    """

    name: str
    measured: float
    tolerance: float | None
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict[str, object]:
        """JSON用の辞書。"""
        return {
            "name": self.name,
            "measured": self.measured,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "detail": self.detail,
        }


class InvariantCheck(ABC):
    """
    不変量検査の抽象基底クラス。

    各スイートはこのインターフェースを実装し、
    1つ以上の CheckResult を返す。
    """

    @property
    @abstractmethod
    def name(self) -> str:
        """
        スイート名を取得する。

        Returns:
            str: `check` サブコマンドで指定する名前
        """
        pass

    @abstractmethod
    def run(self, context: CheckContext) -> list[CheckResult]:
        """
        検査を実行する。

        Parameters:
            context (CheckContext): 検査の入力

        Returns:
            list[CheckResult]: 項目ごとの結果
        """
        pass
