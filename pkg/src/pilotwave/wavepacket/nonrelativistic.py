"""
非相対論的極限モジュール。

ψ = e^{-imt} ψ_NR と書いたときの ψ_NR を1粒子波束について作る。
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from pilotwave.errors import InvalidParameterError, NodeError, UnsupportedOperationError
from pilotwave.spacetime.four_vector import FloatArray
from pilotwave.wavepacket.packet import ComplexArray, WavePacket


@dataclass(frozen=True)
class NonrelativisticPacket:
    """
    1粒子の非相対論的波束 Σ_k c_k exp(-i(ω_k t - p_k·x))。

    Attributes:
        mass (float): 質量 m
        amplitudes (ComplexArray): 係数 c_k（形状 (K,)）
        momenta (FloatArray): 空間運動量（形状 (K, 3)）
        frequencies (FloatArray): 角振動数 ω_k（形状 (K,)）
    """

    mass: float
    amplitudes: ComplexArray
    momenta: FloatArray
    frequencies: FloatArray

    def _terms(self, t: FloatArray, x: FloatArray) -> ComplexArray:
        phase = np.multiply.outer(t, self.frequencies) - x @ self.momenta.T
        return np.asarray(self.amplitudes * np.exp(-1j * phase), dtype=np.complex128)

    @staticmethod
    def _split(points: FloatArray) -> tuple[FloatArray, FloatArray]:
        arr = np.asarray(points, dtype=np.float64)
        if arr.shape[-1] != 4:
            raise InvalidParameterError(
                f"points must have shape (..., 4), got {arr.shape}"
            )
        return arr[..., 0], arr[..., 1:]

    def evaluate_many(self, points: FloatArray) -> ComplexArray:
        """(t, x, y, z) の配列で ψ_NR を一括評価する。"""
        t, x = self._split(points)
        return np.asarray(self._terms(t, x).sum(axis=-1), dtype=np.complex128)

    def evaluate(self, x: Sequence[float], t: float) -> complex:
        """位置 x・時刻 t での ψ_NR を返す。"""
        point = np.array([t, *x, *([0.0] * (3 - len(x)))], dtype=np.float64)
        return complex(self.evaluate_many(point))

    def velocity_many(self, points: FloatArray) -> FloatArray:
        """
        シュレディンガー方程式のボーム速度 ∇S/m を一括評価する。

        Parameters:
            points (FloatArray): 形状 (..., 4) の (t, x, y, z)

        Returns:
            FloatArray: 形状 (..., 3)

        Raises:
            NodeError: ψ_NR がノード上にある場合
        """
        t, x = self._split(points)
        terms = self._terms(t, x)
        psi = terms.sum(axis=-1)
        if np.any(psi == 0):
            raise NodeError("Schrödinger velocity is undefined at a node")
        grad = 1j * (terms @ self.momenta)
        return np.asarray(
            np.imag(grad / psi[..., np.newaxis]) / self.mass, dtype=np.float64
        )

    def velocity(self, x: Sequence[float], t: float) -> FloatArray:
        """位置 x・時刻 t でのボーム速度（3成分）を返す。"""
        point = np.array([t, *x, *([0.0] * (3 - len(x)))], dtype=np.float64)
        return self.velocity_many(point)


def _single_particle(packet: WavePacket) -> None:
    if packet.n_particles != 1:
        raise UnsupportedOperationError(
            "nonrelativistic reduction is defined for single-particle packets, "
            f"got {packet.n_particles} particles"
        )


def nonrelativistic_reduce(packet: WavePacket) -> NonrelativisticPacket:
    """
    ψ = e^{-imt} ψ_NR の ψ_NR を返す（各モードの振動数を E → E - m に移す）。

    縮約した波束の値は e^{+imt}·ψ に一致し、絶対値は ψ と同じ。

    Raises:
        UnsupportedOperationError: 粒子数が2以上の場合
    """
    _single_particle(packet)
    mass = packet.masses[0]
    momenta = np.array(packet.momenta[:, 0, 1:], dtype=np.float64)
    frequencies = np.array(packet.momenta[:, 0, 0] - mass, dtype=np.float64)
    return NonrelativisticPacket(
        mass, np.array(packet.amplitudes), momenta, frequencies
    )


def schrodinger_packet(packet: WavePacket) -> NonrelativisticPacket:
    """
    振動数を |p|²/2m に置き換えた自由シュレディンガー波束を返す。

    E - m との差は -|p|⁴/8m³ 程度で、|p|/m → 0 の極限で一致する。
    """
    _single_particle(packet)
    mass = packet.masses[0]
    momenta = np.array(packet.momenta[:, 0, 1:], dtype=np.float64)
    frequencies = np.sum(momenta**2, axis=-1) / (2.0 * mass)
    return NonrelativisticPacket(
        mass, np.array(packet.amplitudes), momenta, frequencies
    )
