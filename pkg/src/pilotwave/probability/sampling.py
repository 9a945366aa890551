"""
アンサンブルのサンプリングモジュール。

箱上の一様提案と包絡 (Σ|c_k|)² による棄却サンプリングで |ψ|² に従う配置を引く。
バッチ b は常にストリーム (seed, b) を使い、受理した点はバッチ順に並べるので、
スレッド数によらず同じアンサンブルになる。
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from pilotwave.defaults import MAX_PROPOSALS, MIN_ACCEPTANCE_RATE, SAMPLING_BATCH
from pilotwave.errors import InvalidParameterError, PathologicalEnvelopeError
from pilotwave.probability.box import SpacetimeBox
from pilotwave.probability.density import density_many
from pilotwave.probability.rng import StreamPurpose, stream
from pilotwave.spacetime.four_vector import Configuration, FloatArray
from pilotwave.wavepacket.packet import WavePacket

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Ensemble:
    """
    |ψ|² から引いた配置の集まり。

    Attributes:
        points (FloatArray): 形状 (count, n, 4) の配置
        proposals (int): 使った提案の総数（最後のバッチは最後に受理した提案まで）
        seed (int): シード
    """

    points: FloatArray
    proposals: int
    seed: int

    def __len__(self) -> int:
        return int(self.points.shape[0])

    @property
    def acceptance_rate(self) -> float:
        """受理率。"""
        return len(self) / self.proposals if self.proposals else 0.0

    def to_configurations(self) -> list[Configuration]:
        """Configuration のリストに変換する。"""
        return [Configuration.from_array(row) for row in self.points]


def sample_ensemble(
    packet: WavePacket,
    box: SpacetimeBox,
    count: int,
    seed: int,
    threads: int = 1,
    batch_size: int = SAMPLING_BATCH,
    max_proposals: int = MAX_PROPOSALS,
) -> Ensemble:
    """
    棄却サンプリングで |ψ|²/∫|ψ|² に従う count 個の配置を引く。

    全ての 4n 座標を箱の中で一様に提案する（固定時刻面ではない）。

    Parameters:
        packet (WavePacket): 波束
        box (SpacetimeBox): 提案領域
        count (int): 欲しい配置数（1以上）
        seed (int): シード
        threads (int): バッチを並列処理するスレッド数（結果には影響しない）
        batch_size (int): 1バッチあたりの提案数
        max_proposals (int): 受理率を判定するまでの提案数

    Returns:
        Ensemble: 配置と受理統計

    Raises:
        InvalidParameterError: count < 1 の場合
        PathologicalEnvelopeError: 受理率が低すぎる場合
    """
    if count < 1:
        raise InvalidParameterError(f"count must be at least 1, got {count}")
    if batch_size < 1:
        raise InvalidParameterError(f"batch size must be positive, got {batch_size}")
    box.check_particles(packet.n_particles)
    envelope = packet.amplitude_bound**2
    if not envelope > 0.0:
        raise PathologicalEnvelopeError("envelope is zero: every amplitude vanishes")

    def propose(index: int) -> tuple[FloatArray, npt.NDArray[np.intp]]:
        # 受理した点と、バッチ内での提案番号
        rng = stream(seed, index, StreamPurpose.SAMPLING)
        points = box.uniform(rng, batch_size)
        threshold = rng.uniform(0.0, envelope, size=batch_size)
        positions = np.flatnonzero(threshold < density_many(packet, points))
        return points[positions], positions

    accepted: list[FloatArray] = []
    n_accepted = 0
    proposals = 0
    next_batch = 0
    workers = max(1, threads)
    executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while n_accepted < count:
            indices = range(next_batch, next_batch + workers)
            next_batch += workers
            if executor is None:
                results = [propose(i) for i in indices]
            else:
                results = list(executor.map(propose, indices))
            for result, positions in results:
                # 先に埋まったらそれ以降のバッチは捨てる
                if n_accepted >= count:
                    break
                need = count - n_accepted
                if result.shape[0] >= need:
                    # 最後のバッチは必要な点を引いたところまでを提案数に数える
                    accepted.append(result[:need])
                    n_accepted = count
                    proposals += int(positions[need - 1]) + 1
                else:
                    accepted.append(result)
                    n_accepted += result.shape[0]
                    proposals += batch_size
            if proposals >= max_proposals and n_accepted < count:
                rate = n_accepted / proposals
                if rate < MIN_ACCEPTANCE_RATE:
                    raise PathologicalEnvelopeError(
                        f"acceptance rate {rate:.3g} after {proposals} proposals "
                        f"is below {MIN_ACCEPTANCE_RATE}"
                    )
    finally:
        if executor is not None:
            executor.shutdown()

    points = np.concatenate(accepted, axis=0)
    ensemble = Ensemble(np.ascontiguousarray(points), proposals, seed)
    logger.info(
        "sampled %d configurations from %d proposals (acceptance %.4f)",
        len(ensemble),
        proposals,
        ensemble.acceptance_rate,
    )
    return ensemble
