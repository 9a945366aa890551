"""
ローレンツブーストモジュール。

座標軸方向のブーストのみを扱う。回転や一般のポアンカレ変換は扱わない。
"""

import math
from enum import IntEnum

import numpy as np

from pilotwave.errors import InvalidParameterError
from pilotwave.spacetime.four_vector import Configuration, FloatArray, FourVector


class SpatialAxis(IntEnum):
    """
    ブースト方向を表す列挙型。

    値は (t, x, y, z) 配列での成分インデックスに一致する。
    """

    X = 1
    Y = 2
    Z = 3

    @classmethod
    def parse(cls, name: "str | SpatialAxis") -> "SpatialAxis":
        """'x' / 'y' / 'z' の文字列から軸を得る。"""
        if isinstance(name, SpatialAxis):
            return name
        try:
            return cls[name.upper()]
        except KeyError:
            raise InvalidParameterError(f"Unknown boost axis: {name}") from None


def boost_array(
    points: FloatArray, rapidity: float, axis: SpatialAxis | str = SpatialAxis.X
) -> FloatArray:
    """
    最後の軸が (t, x, y, z) の配列を一括でブーストする。

    (t, 軸) 平面での双曲回転
        t' = t cosh χ + a sinh χ,  a' = a cosh χ + t sinh χ
    を適用する。χ > 0 で静止系の運動量は軸の正方向へ動く。

    Parameters:
        points (FloatArray): 形状 (..., 4)
        rapidity (float): ラピディティ χ
        axis (SpatialAxis | str): ブースト方向

    Returns:
        FloatArray: ブースト後の配列（新しい配列）
    """
    if not math.isfinite(rapidity):
        raise InvalidParameterError(f"rapidity must be finite, got {rapidity}")
    k = SpatialAxis.parse(axis)
    ch = math.cosh(rapidity)
    sh = math.sinh(rapidity)
    src = np.asarray(points, dtype=np.float64)
    out = src.copy()
    out[..., 0] = ch * src[..., 0] + sh * src[..., k]
    out[..., k] = sh * src[..., 0] + ch * src[..., k]
    return out


def boost(
    v: FourVector, rapidity: float, axis: SpatialAxis | str = SpatialAxis.X
) -> FourVector:
    """
    4元ベクトルを座標軸方向にブーストする。

    boost((m,0,0,0), χ, x) = (m cosh χ, m sinh χ, 0, 0)。
    任意の2ベクトルのミンコフスキー内積を保つ。

    Parameters:
        v (FourVector): 変換するベクトル
        rapidity (float): ラピディティ
        axis (SpatialAxis | str): ブースト方向

    Returns:
        FourVector: ブースト後のベクトル
    """
    return FourVector.from_array(boost_array(v.as_array(), rapidity, axis))


def boost_configuration(
    q: Configuration, rapidity: float, axis: SpatialAxis | str = SpatialAxis.X
) -> Configuration:
    """配置の全ての点を同じブーストで変換する。"""
    return Configuration.from_array(boost_array(q.to_array(), rapidity, axis))
