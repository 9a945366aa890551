"""
時空モジュール。

4元ベクトル、計量、ローレンツブーストを提供する。
"""

from pilotwave.spacetime.four_vector import (
    MINKOWSKI,
    Configuration,
    FloatArray,
    FourVector,
    Metric,
    lower_index,
    minkowski_dot,
    raise_index,
)
from pilotwave.spacetime.lorentz import (
    SpatialAxis,
    boost,
    boost_array,
    boost_configuration,
)

__all__ = [
    "MINKOWSKI",
    "Configuration",
    "FloatArray",
    "FourVector",
    "Metric",
    "SpatialAxis",
    "boost",
    "boost_array",
    "boost_configuration",
    "lower_index",
    "minkowski_dot",
    "raise_index",
]
