"""
多時間・多粒子の波束モジュール。

ψ(x_1, …, x_n) = Σ_k c_k Π_a exp(-i p_{k,a}·x_a)

を有限個のモードの和として保持する。各モードは各粒子について
クライン–ゴルドン方程式を厳密に満たすので、格子もPDEソルバーも使わない。
微分はすべて解析的に計算する。
"""

from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from pilotwave.errors import DimensionError, InvalidParameterError
from pilotwave.spacetime.four_vector import (
    MINKOWSKI,
    Configuration,
    FloatArray,
)
from pilotwave.spacetime.lorentz import SpatialAxis, boost_array
from pilotwave.wavepacket.mode import PlaneWaveMode, on_shell_energy

ComplexArray = npt.NDArray[np.complex128]


class WavePacket:
    """
    正エネルギー平面波モードの有限重ね合わせ。

    生成後は不変で、evaluate / gradient は純粋関数なので
    同期なしに複数スレッドから共有してよい。

    Attributes:
        masses (tuple[float, ...]): 粒子ごとの質量 m_a
        modes (tuple[PlaneWaveMode, ...]): モードのリスト
    """

    __slots__ = ("masses", "modes", "_amplitudes", "_momenta", "_covariant")

    def __init__(
        self, masses: Sequence[float], modes: Sequence[PlaneWaveMode]
    ) -> None:
        """
        波束を生成する。

        Parameters:
            masses (Sequence[float]): 粒子ごとの質量（全て正）
            modes (Sequence[PlaneWaveMode]): 1個以上のモード

        Raises:
            InvalidParameterError: 質量が正でない、またはモードが空の場合
            DimensionError: モードの運動量の数が粒子数と一致しない場合
        """
        if len(masses) == 0:
            raise InvalidParameterError("a packet needs at least one particle")
        if len(modes) == 0:
            raise InvalidParameterError("a packet needs at least one mode")
        for a, m in enumerate(masses):
            if not m > 0.0 or not np.isfinite(m):
                raise InvalidParameterError(
                    f"masses[{a}] must be positive and finite, got {m}"
                )
        n = len(masses)
        for k, mode in enumerate(modes):
            if len(mode.momenta) != n:
                raise DimensionError(
                    f"modes[{k}] has {len(mode.momenta)} momenta for {n} particles"
                )

        self.masses: tuple[float, ...] = tuple(float(m) for m in masses)
        self.modes: tuple[PlaneWaveMode, ...] = tuple(modes)

        momenta = np.empty((len(modes), n, 4), dtype=np.float64)
        for k, mode in enumerate(modes):
            for a, p in enumerate(mode.momenta):
                # 正エネルギー分枝のみ
                momenta[k, a, 0] = on_shell_energy(p, self.masses[a])
                momenta[k, a, 1:] = p
        amplitudes = np.array([mode.amplitude for mode in modes], dtype=np.complex128)
        covariant = MINKOWSKI.flip_arrays(momenta)
        for array in (momenta, amplitudes, covariant):
            array.flags.writeable = False
        self._amplitudes: ComplexArray = amplitudes
        self._momenta: FloatArray = momenta
        self._covariant: FloatArray = covariant

    def __repr__(self) -> str:
        return (
            f"WavePacket(n_particles={self.n_particles}, "
            f"n_modes={self.n_modes}, masses={self.masses})"
        )

    # ============
    # 基本情報
    # ============

    @property
    def n_particles(self) -> int:
        """粒子数 n。"""
        return len(self.masses)

    @property
    def n_modes(self) -> int:
        """モード数。"""
        return len(self.modes)

    @property
    def amplitudes(self) -> ComplexArray:
        """係数 c_k（読み取り専用、形状 (K,)）。"""
        return self._amplitudes

    @property
    def momenta(self) -> FloatArray:
        """反変4元運動量 p^μ_{k,a}（読み取り専用、形状 (K, n, 4)）。"""
        return self._momenta

    @property
    def covariant_momenta(self) -> FloatArray:
        """共変4元運動量 p_{k,aμ}（読み取り専用、形状 (K, n, 4)）。"""
        return self._covariant

    @property
    def amplitude_bound(self) -> float:
        """Σ_k |c_k|。あらゆる配置で |ψ| の上界になる。"""
        return float(np.abs(self._amplitudes).sum())

    def energies(self) -> FloatArray:
        """モード・粒子ごとの質量殻エネルギー（形状 (K, n)）。"""
        return np.asarray(self._momenta[..., 0], dtype=np.float64)

    # ============
    # 評価
    # ============

    def _check_points(self, points: FloatArray) -> FloatArray:
        arr = np.asarray(points, dtype=np.float64)
        if arr.ndim < 2 or arr.shape[-2:] != (self.n_particles, 4):
            raise DimensionError(
                f"expected configurations of shape (..., {self.n_particles}, 4), "
                f"got {arr.shape}"
            )
        return arr

    def _terms(self, points: FloatArray) -> ComplexArray:
        # c_k Π_a exp(-i p_{k,a}·x_a) を (..., K) で返す
        phase = np.einsum("...am,kam->...k", points, self._covariant)
        return np.asarray(self._amplitudes * np.exp(-1j * phase), dtype=np.complex128)

    def evaluate_many(self, points: FloatArray) -> ComplexArray:
        """
        配置の配列で ψ を一括評価する。

        Parameters:
            points (FloatArray): 形状 (..., n, 4)

        Returns:
            ComplexArray: 形状 (...)
        """
        arr = self._check_points(points)
        return np.asarray(self._terms(arr).sum(axis=-1), dtype=np.complex128)

    def evaluate_with_gradient(
        self, points: FloatArray
    ) -> tuple[ComplexArray, ComplexArray]:
        """
        ψ と共変勾配 ∂_{aμ}ψ を同じ位相計算から求める。

        Parameters:
            points (FloatArray): 形状 (..., n, 4)

        Returns:
            tuple[ComplexArray, ComplexArray]: 形状 (...) と (..., n, 4)
        """
        arr = self._check_points(points)
        terms = self._terms(arr)
        psi = terms.sum(axis=-1)
        grad = -1j * np.einsum("...k,kam->...am", terms, self._covariant)
        return (
            np.asarray(psi, dtype=np.complex128),
            np.asarray(grad, dtype=np.complex128),
        )

    def gradient_many(self, points: FloatArray) -> ComplexArray:
        """共変勾配 ∂_{aμ}ψ を一括評価する（形状 (..., n, 4)）。"""
        return self.evaluate_with_gradient(points)[1]

    def evaluate(self, q: Configuration) -> complex:
        """
        配置 q での ψ の値を返す。

        |ψ(q)| ≤ Σ_k |c_k| が常に成り立つ。

        Raises:
            DimensionError: 配置の粒子数が一致しない場合
        """
        return complex(self.evaluate_many(q.to_array()))

    def gradient(self, q: Configuration, a: int) -> ComplexArray:
        """
        粒子 a についての共変勾配 ∂_{aμ}ψ を解析的に返す。

        ∂_{aμ}ψ = Σ_k c_k (-i p_{k,aμ}) Π_b exp(-i p_{k,b}·x_b)

        Parameters:
            q (Configuration): 配置
            a (int): 粒子インデックス

        Returns:
            ComplexArray: 形状 (4,) の複素成分（下付き添字）

        Raises:
            DimensionError: インデックスが範囲外の場合
        """
        self.check_particle(a)
        return np.asarray(self.gradient_many(q.to_array())[a], dtype=np.complex128)

    def check_particle(self, a: int) -> None:
        """粒子インデックスが範囲内か確認する。"""
        if not 0 <= a < self.n_particles:
            raise DimensionError(
                f"particle index {a} out of range for {self.n_particles} particles"
            )

    # ============
    # 変換
    # ============

    def scaled(self, factor: complex) -> "WavePacket":
        """全ての振幅を factor 倍した波束を返す。"""
        return WavePacket(self.masses, [mode.scaled(factor) for mode in self.modes])

    def boosted(
        self, rapidity: float, axis: SpatialAxis | str = SpatialAxis.X
    ) -> "WavePacket":
        """
        全てのモードの4元運動量をブーストした波束を返す。

        スカラー場として ψ'(Λx) = ψ(x) が成り立つ。正エネルギーの
        質量殻ベクトルはブースト後も正エネルギーの質量殻上にあるので、
        エネルギーは空間成分から導出し直す。
        """
        boosted = boost_array(self._momenta, rapidity, axis)
        modes = [
            PlaneWaveMode(
                mode.amplitude,
                tuple(
                    (float(p[1]), float(p[2]), float(p[3])) for p in boosted[k]
                ),
            )
            for k, mode in enumerate(self.modes)
        ]
        return WavePacket(self.masses, modes)
