"""
4元ベクトルモジュール。

ミンコフスキー時空の点・運動量と、添字の上げ下げを提供する。
計量の符号は (+, -, -, -) に固定する。
"""

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import ClassVar

import numpy as np
import numpy.typing as npt

from pilotwave.errors import InvalidParameterError

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True, slots=True)
class FourVector:
    """
    ミンコフスキー時空の4元ベクトル。

    成分は自然単位系の実数で、コンストラクタは NaN や無限大を受け付けない。

    Attributes:
        t (float): 時間成分 x^0
        x (float): 空間成分 x^1
        y (float): 空間成分 x^2
        z (float): 空間成分 x^3
    """

    t: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self) -> None:
        for name in ("t", "x", "y", "z"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidParameterError(
                    f"FourVector component {name} must be finite, got {value}"
                )

    @classmethod
    def from_array(cls, values: Sequence[float] | FloatArray) -> "FourVector":
        """
        長さ4の配列から4元ベクトルを作る。

        Parameters:
            values (Sequence[float] | FloatArray): (t, x, y, z)

        Returns:
            FourVector: 生成した4元ベクトル
        """
        if len(values) != 4:
            raise InvalidParameterError(f"expected 4 components, got {len(values)}")
        t, x, y, z = (float(v) for v in values)
        return cls(t, x, y, z)

    def as_array(self) -> FloatArray:
        """成分を (t, x, y, z) の配列で返す。"""
        return np.array([self.t, self.x, self.y, self.z], dtype=np.float64)

    @property
    def spatial(self) -> tuple[float, float, float]:
        """空間部分 (x, y, z)。"""
        return (self.x, self.y, self.z)


class Metric:
    """
    平坦なミンコフスキー計量 g = diag(+1, -1, -1, -1)。

    不変であり、添字を上げてから下げると恒等写像になる。
    対角なので上付き・下付きの成分は同じ値を持つ。
    """

    SIGNATURE: ClassVar[tuple[float, float, float, float]] = (1.0, -1.0, -1.0, -1.0)

    @property
    def diagonal(self) -> FloatArray:
        """計量の対角成分を読み取り専用配列で返す。"""
        diag = np.array(self.SIGNATURE, dtype=np.float64)
        diag.flags.writeable = False
        return diag

    def dot_arrays(self, a: FloatArray, b: FloatArray) -> FloatArray:
        """
        最後の軸が4成分の配列同士の内積 g_{μν} a^μ b^ν を計算する。

        Parameters:
            a (FloatArray): 形状 (..., 4)
            b (FloatArray): 形状 (..., 4)

        Returns:
            FloatArray: 形状 (...)
        """
        return np.asarray(
            a[..., 0] * b[..., 0]
            - a[..., 1] * b[..., 1]
            - a[..., 2] * b[..., 2]
            - a[..., 3] * b[..., 3],
            dtype=np.float64,
        )

    def flip_arrays(self, a: FloatArray) -> FloatArray:
        """最後の軸に計量を掛ける（上げ・下げ共通）。"""
        return np.asarray(a * self.diagonal, dtype=np.float64)


MINKOWSKI = Metric()


def minkowski_dot(a: FourVector, b: FourVector) -> float:
    """
    ミンコフスキー内積 a·b = a^t b^t - a^x b^x - a^y b^y - a^z b^z。

    Parameters:
        a (FourVector): 1つ目のベクトル
        b (FourVector): 2つ目のベクトル

    Returns:
        float: 内積（引数について対称）
    """
    return a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z


def raise_index(covector: FourVector) -> FourVector:
    """共変成分から反変成分へ。時間成分はそのまま、空間成分の符号を反転する。"""
    return FourVector(covector.t, -covector.x, -covector.y, -covector.z)


def lower_index(vector: FourVector) -> FourVector:
    """反変成分から共変成分へ。raise_index の逆写像。"""
    return FourVector(vector.t, -vector.x, -vector.y, -vector.z)


@dataclass(frozen=True, slots=True)
class Configuration:
    """
    n粒子の時空配置 (x_1, …, x_n)。

    各粒子が自分の時間座標 t_a を持つ多時間の配置で、
    波動関数の引数でありボーム系の状態でもある。

    Attributes:
        points (tuple[FourVector, ...]): 粒子ごとの時空点
    """

    points: tuple[FourVector, ...]

    def __post_init__(self) -> None:
        if len(self.points) == 0:
            raise InvalidParameterError("a configuration needs at least one point")

    def __len__(self) -> int:
        return len(self.points)

    @classmethod
    def of(cls, points: Iterable[FourVector]) -> "Configuration":
        """任意のイテラブルから配置を作る。"""
        return cls(tuple(points))

    @classmethod
    def from_array(cls, array: FloatArray) -> "Configuration":
        """
        形状 (n, 4) の配列から配置を作る。

        Parameters:
            array (FloatArray): 粒子ごとの (t, x, y, z)

        Returns:
            Configuration: 生成した配置
        """
        arr = np.asarray(array, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] != 4:
            raise InvalidParameterError(
                f"configuration array must have shape (n, 4), got {arr.shape}"
            )
        return cls(tuple(FourVector.from_array(row) for row in arr))

    @classmethod
    def coincident(
        cls, t: float, positions: Sequence[Sequence[float]]
    ) -> "Configuration":
        """
        全粒子が同じ時刻 t を持つ配置を作る。

        多時間の式が単一時間の式に帰着する t_1 = … = t_n の場合。

        Parameters:
            t (float): 共通の時刻
            positions (Sequence[Sequence[float]]): 粒子ごとの空間座標（1〜3成分）

        Returns:
            Configuration: 同時刻配置
        """
        points = []
        for position in positions:
            spatial = list(position) + [0.0] * (3 - len(position))
            if len(spatial) != 3:
                raise InvalidParameterError(
                    f"spatial position has {len(position)} components"
                )
            points.append(FourVector(t, *spatial))
        return cls(tuple(points))

    def to_array(self) -> FloatArray:
        """形状 (n, 4) の配列を返す。"""
        return np.array([p.as_array() for p in self.points], dtype=np.float64)

    def replace_point(self, index: int, point: FourVector) -> "Configuration":
        """index 番目の粒子だけを置き換えた配置を返す。"""
        points = list(self.points)
        points[index] = point
        return Configuration(tuple(points))
