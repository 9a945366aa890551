"""
クライン–ゴルドン残差モジュール。

波束は構成上クライン–ゴルドン方程式を厳密に満たすので、
ここでの差分残差は評価コードの検証に使う。正しい実装なら残差は
差分の打ち切り誤差 O(h²) だけになる。
"""

import numpy as np

from pilotwave.errors import InvalidParameterError
from pilotwave.spacetime.four_vector import MINKOWSKI, Configuration, FloatArray
from pilotwave.wavepacket.packet import ComplexArray, WavePacket


def _box_operator_fd(
    packet: WavePacket, center: FloatArray, a: int, h: float
) -> tuple[complex, complex]:
    # 中心差分で (∂^μ∂_μ ψ, ψ) を返す
    stencil = np.repeat(center[np.newaxis], 9, axis=0)
    for mu in range(4):
        stencil[1 + 2 * mu, a, mu] += h
        stencil[2 + 2 * mu, a, mu] -= h
    values: ComplexArray = packet.evaluate_many(stencil)
    psi = values[0]
    second = np.array(
        [
            (values[1 + 2 * mu] - 2.0 * psi + values[2 + 2 * mu]) / (h * h)
            for mu in range(4)
        ]
    )
    box = complex(np.sum(MINKOWSKI.diagonal * second))
    return box, complex(psi)


def kg_residual_fd(packet: WavePacket, q: Configuration, a: int, h: float) -> float:
    """
    粒子 a についての差分残差 |(∂_a^μ∂_{aμ} + m_a²)ψ| を返す。

    2次の中心差分を4軸それぞれに適用する。

    Parameters:
        packet (WavePacket): 波束
        q (Configuration): 配置
        a (int): 粒子インデックス
        h (float): 差分幅（正）

    Returns:
        float: 残差の大きさ（O(h²) で0に収束する）
    """
    if not h > 0.0:
        raise InvalidParameterError(
            f"finite-difference step must be positive, got {h}"
        )
    packet.check_particle(a)
    box, psi = _box_operator_fd(packet, q.to_array(), a, h)
    return abs(box + packet.masses[a] ** 2 * psi)


def kg_total_residual_fd(packet: WavePacket, q: Configuration, h: float) -> float:
    """
    n粒子の和の方程式 Σ_a (∂_a^μ∂_{aμ} + m_a²)ψ = 0 の差分残差を返す。

    Parameters:
        packet (WavePacket): 波束
        q (Configuration): 配置
        h (float): 差分幅（正）

    Returns:
        float: 残差の大きさ
    """
    if not h > 0.0:
        raise InvalidParameterError(
            f"finite-difference step must be positive, got {h}"
        )
    center = q.to_array()
    total = 0j
    for a in range(packet.n_particles):
        box, psi = _box_operator_fd(packet, center, a, h)
        total += box + packet.masses[a] ** 2 * psi
    return abs(total)


def kg_scale(packet: WavePacket) -> float:
    """
    残差の正規化尺度 Σ|c_k| · max(E² + |p|² + m²)。

    打ち切り誤差はこの量に比例するので、検査の許容値はこれで割って使う。
    """
    momenta = packet.momenta
    spatial = np.sum(momenta[..., 1:] ** 2, axis=-1)
    masses = np.asarray(packet.masses)
    scale = float(np.max(momenta[..., 0] ** 2 + spatial + masses**2))
    return packet.amplitude_bound * scale
