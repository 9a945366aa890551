"""
ボーム速度場モジュール。

ψ = |ψ|e^{iS} と書いたときの v^μ_a = -∂_a^μ S を解析的な勾配から求める。
S 自体は多価なので作らず、∂_{aμ}S = Im(∂_{aμ}ψ / ψ) だけを使う。
"""

from dataclasses import dataclass

import numpy as np

from pilotwave.defaults import NODE_THRESHOLD_FACTOR
from pilotwave.errors import NodeError
from pilotwave.spacetime.four_vector import (
    MINKOWSKI,
    Configuration,
    FloatArray,
    FourVector,
)
from pilotwave.wavepacket.packet import WavePacket


def node_threshold(
    packet: WavePacket, factor: float = NODE_THRESHOLD_FACTOR
) -> float:
    """ノード判定のしきい値 factor × Σ|c_k|。"""
    return factor * packet.amplitude_bound


@dataclass(frozen=True, slots=True)
class VelocitySample:
    """
    1つの配置での速度場。

    Attributes:
        velocities (tuple[FourVector, ...]): 粒子ごとの v^μ_a（上付き）
        at (Configuration): 評価した配置
        psi_modulus (float): その配置での |ψ|
    """

    velocities: tuple[FourVector, ...]
    at: Configuration
    psi_modulus: float


def velocity_many(
    packet: WavePacket, points: FloatArray
) -> tuple[FloatArray, FloatArray]:
    """
    速度場と |ψ| を一括評価する。ノード判定は呼び出し側が行う。

    Parameters:
        packet (WavePacket): 波束
        points (FloatArray): 形状 (..., n, 4)

    Returns:
        tuple[FloatArray, FloatArray]: 形状 (..., n, 4) の v^μ_a と (...) の |ψ|。
            ψ = 0 の点の速度は NaN。
    """
    psi, grad = packet.evaluate_with_gradient(points)
    modulus = np.abs(psi)
    with np.errstate(divide="ignore", invalid="ignore"):
        phase_gradient = np.imag(grad / psi[..., np.newaxis, np.newaxis])
    # v^μ = -g^{μν} ∂_ν S
    velocity = -MINKOWSKI.flip_arrays(np.asarray(phase_gradient, dtype=np.float64))
    return velocity, np.asarray(modulus, dtype=np.float64)


def _check_node(
    packet: WavePacket, q: Configuration, modulus: float, threshold: float | None
) -> None:
    limit = node_threshold(packet) if threshold is None else threshold
    if not modulus > limit:
        raise NodeError(
            f"|psi| = {modulus:.3e} is within the node threshold {limit:.3e}",
            configuration=q,
            modulus=modulus,
        )


def phase_gradient(
    packet: WavePacket, q: Configuration, a: int, threshold: float | None = None
) -> FourVector:
    """
    粒子 a の位相勾配 ∂_{aμ}S（下付き）を返す。

    単一平面波では -p_μ に厳密に一致する。

    Parameters:
        packet (WavePacket): 波束
        q (Configuration): 配置
        a (int): 粒子インデックス
        threshold (float | None): ノードしきい値（None なら既定値）

    Raises:
        NodeError: |ψ(q)| がしきい値以下の場合（配置を保持する）
        DimensionError: インデックスや配置の粒子数が一致しない場合
    """
    packet.check_particle(a)
    psi, grad = packet.evaluate_with_gradient(q.to_array())
    modulus = abs(complex(psi))
    _check_node(packet, q, modulus, threshold)
    return FourVector.from_array(np.imag(grad[a] / psi))


def velocity_field(
    packet: WavePacket, q: Configuration, threshold: float | None = None
) -> VelocitySample:
    """
    配置 q での全粒子の速度 v^μ_a = -∂_a^μ S を返す。

    単一平面波では v^μ = p^μ（v⁰ = E > 0）。

    Raises:
        NodeError: |ψ(q)| がしきい値以下の場合
    """
    velocity, modulus = velocity_many(packet, q.to_array())
    _check_node(packet, q, float(modulus), threshold)
    return VelocitySample(
        tuple(FourVector.from_array(row) for row in velocity),
        q,
        float(modulus),
    )
