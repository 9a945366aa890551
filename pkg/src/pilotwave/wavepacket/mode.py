"""
平面波モードモジュール。

正エネルギーの質量殻上にあるクライン–ゴルドン平面波モードを定義する。
負エネルギーのモードを作るAPIは存在しない。
"""

import cmath
import math
from collections.abc import Sequence
from dataclasses import dataclass

from pilotwave.errors import InvalidParameterError

Vector3 = tuple[float, float, float]


def on_shell_energy(p: Sequence[float], m: float) -> float:
    """
    質量殻上の正エネルギー E = +√(|p|² + m²) を返す。

    Parameters:
        p (Sequence[float]): 空間運動量（1〜3成分、足りない成分は0）
        m (float): 質量（正）

    Returns:
        float: エネルギー（常に m 以上）

    Raises:
        InvalidParameterError: 質量が正でない場合
    """
    if not m > 0.0 or not math.isfinite(m):
        raise InvalidParameterError(f"mass must be positive and finite, got {m}")
    return math.sqrt(sum(c * c for c in p) + m * m)


def as_vector3(values: Sequence[float], label: str = "momentum") -> Vector3:
    """1〜3成分の列を有限な3成分タプルに揃える。"""
    if not 1 <= len(values) <= 3:
        raise InvalidParameterError(f"{label} must have 1 to 3 components")
    padded = [float(v) for v in values] + [0.0] * (3 - len(values))
    if not all(math.isfinite(v) for v in padded):
        raise InvalidParameterError(f"{label} components must be finite: {padded}")
    return (padded[0], padded[1], padded[2])


@dataclass(frozen=True, slots=True)
class PlaneWaveMode:
    """
    n粒子の平面波モード c_k Π_a exp(-i p_{k,a}·x_a)。

    エネルギーは保持せず、パケットの質量から常に質量殻上で導出する。

    Attributes:
        amplitude (complex): 係数 c_k
        momenta (tuple[Vector3, ...]): 粒子ごとの空間運動量 p_{k,a}
    """

    amplitude: complex
    momenta: tuple[Vector3, ...]

    def __post_init__(self) -> None:
        if not cmath.isfinite(self.amplitude):
            raise InvalidParameterError(
                f"mode amplitude must be finite, got {self.amplitude}"
            )
        if len(self.momenta) == 0:
            raise InvalidParameterError("a mode needs at least one particle momentum")

    @classmethod
    def create(
        cls, amplitude: complex, momenta: Sequence[Sequence[float]]
    ) -> "PlaneWaveMode":
        """
        運動量を1〜3成分の列で受け取ってモードを作る。

        1+1D のシナリオでは運動量を (p,) と書けば残りは0で埋まる。
        """
        vectors = tuple(
            as_vector3(p, f"momenta[{i}]") for i, p in enumerate(momenta)
        )
        return cls(complex(amplitude), vectors)

    def scaled(self, factor: complex) -> "PlaneWaveMode":
        """振幅だけを factor 倍したモードを返す。"""
        return PlaneWaveMode(self.amplitude * factor, self.momenta)
