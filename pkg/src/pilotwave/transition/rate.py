"""
遷移率モジュール。

有限の時間カットオフ T でエネルギー保存のデルタ関数を正則化した振幅

    A_T = ∫_{-T/2}^{T/2} e^{iΔE t} dt = 2 sin(ΔE T/2) / ΔE

を扱う。|A_T|² は T とともに発散するが、|A_T|²/T（Fejér核）の ΔE についての
積分は T によらず 2π になる。物理的なのは |A|² ではなく |A|²/T である。

比例定数は付けず、振幅は上の積分そのものとする。波束とは独立に動く。
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from pilotwave.defaults import (
    RATE_POINTS_PER_PANEL,
    RATE_RECOMMENDED_WIDTHS,
    RATE_SERIES_CUTOFF,
)
from pilotwave.errors import InvalidParameterError
from pilotwave.spacetime.four_vector import FloatArray

logger = logging.getLogger(__name__)


def _check_cutoff(cutoff_t: float) -> None:
    if not (cutoff_t > 0.0 and math.isfinite(cutoff_t)):
        raise InvalidParameterError(
            f"time cutoff must be positive and finite, got {cutoff_t}"
        )


def amplitude_many(delta_e: FloatArray, cutoff_t: float) -> FloatArray:
    """
    A_T を配列で評価する（実数値）。

    |ΔE·T| < RATE_SERIES_CUTOFF では桁落ちを避けて T(1 - (ΔE T)²/24) を使う。
    """
    _check_cutoff(cutoff_t)
    de = np.asarray(delta_e, dtype=np.float64)
    x = de * cutoff_t
    small = np.abs(x) < RATE_SERIES_CUTOFF
    safe = np.where(small, 1.0, de)
    closed = 2.0 * np.sin(0.5 * x) / safe
    series = cutoff_t * (1.0 - x * x / 24.0)
    return np.asarray(np.where(small, series, closed), dtype=np.float64)


def rate_many(delta_e: FloatArray, cutoff_t: float) -> FloatArray:
    """|A_T|²/T を配列で評価する。"""
    amplitude = amplitude_many(delta_e, cutoff_t)
    return np.asarray(amplitude * (amplitude / cutoff_t), dtype=np.float64)


def finite_time_amplitude(delta_e: float, cutoff_t: float) -> complex:
    """
    有限時間の遷移振幅 A_T = ∫_{-T/2}^{T/2} e^{iΔE t} dt を返す。

    対称な窓なので虚部は0。ΔE = 0 では T、ΔE = 2πk/T では0。

    Parameters:
        delta_e (float): E_in - E_fin
        cutoff_t (float): 時間カットオフ T（正）

    Returns:
        complex: 振幅（実数値）
    """
    return complex(float(amplitude_many(np.asarray(delta_e), cutoff_t)), 0.0)


def rate(delta_e: float, cutoff_t: float) -> float:
    """
    遷移率 |A_T|²/T を返す。

    ΔE = 0 では T に一致し、T → ∞ で発散する（(T/2π)δ(0) に対応）。
    """
    return float(rate_many(np.asarray(delta_e), cutoff_t))


def _panels(cutoff_t: float, halfwidth: float) -> int:
    width = 2.0 * math.pi / cutoff_t
    if not halfwidth >= width:
        raise InvalidParameterError(
            f"halfwidth {halfwidth} is below one kernel width 2*pi/T = {width:.6g}"
        )
    if halfwidth < RATE_RECOMMENDED_WIDTHS * width:
        logger.warning(
            "halfwidth %.6g is below the recommended %d * 2*pi/T = %.6g; "
            "tail truncation will be visible",
            halfwidth,
            RATE_RECOMMENDED_WIDTHS,
            RATE_RECOMMENDED_WIDTHS * width,
        )
    return math.ceil(2.0 * halfwidth / width)


def rate_integral(
    cutoff_t: float,
    halfwidth: float,
    points_per_panel: int = RATE_POINTS_PER_PANEL,
) -> float:
    """
    ∫_{-H}^{H} |A_T|²/T dΔE を数値積分する。

    [-H, H] を幅 2π/T 程度の等幅パネルに分け、各パネルでGauss–Legendre則を使う。
    H → ∞ で T によらず 2π に収束し、打ち切り誤差はおよそ 4/(H T)。

    Parameters:
        cutoff_t (float): 時間カットオフ T
        halfwidth (float): 積分の半幅 H（2π/T 以上、100·2π/T 以上を推奨）
        points_per_panel (int): パネルあたりの点数

    Raises:
        InvalidParameterError: H < 2π/T または点数が2未満の場合
    """
    _check_cutoff(cutoff_t)
    if points_per_panel < 2:
        raise InvalidParameterError(
            f"need at least 2 points per panel, got {points_per_panel}"
        )
    panels = _panels(cutoff_t, halfwidth)
    nodes, weights = np.polynomial.legendre.leggauss(points_per_panel)
    edges = np.linspace(-halfwidth, halfwidth, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    grid = mid[:, np.newaxis] + half[:, np.newaxis] * nodes
    values = rate_many(grid, cutoff_t)
    return float(np.sum(half[:, np.newaxis] * weights * values))


@dataclass(frozen=True)
class RateProfile:
    """
    ΔE の格子上の遷移率。

    Attributes:
        delta_e_grid (FloatArray): ΔE の値
        rate (FloatArray): |A_T|²/T（非負、ΔE について偶）
        cutoff (float): T
    """

    delta_e_grid: FloatArray
    rate: FloatArray
    cutoff: float

    def __post_init__(self) -> None:
        _check_cutoff(self.cutoff)
        if self.delta_e_grid.shape != self.rate.shape:
            raise InvalidParameterError("grid and rate must have the same shape")
        if np.any(self.rate < 0.0):
            raise InvalidParameterError("rate must be nonnegative")

    def rows(self) -> list[tuple[float, float]]:
        """(ΔE, rate) の行。"""
        return [
            (float(de), float(r))
            for de, r in zip(self.delta_e_grid, self.rate, strict=True)
        ]

    def to_csv(self) -> str:
        """`# T=<値>` の行と `delta_E,rate` の列を持つCSV文字列。"""
        lines = [f"# T={self.cutoff!r}", "delta_E,rate"]
        lines += [f"{de!r},{r!r}" for de, r in self.rows()]
        return "\n".join(lines) + "\n"


def rate_profile(cutoff_t: float, halfwidth: float, points: int = 2001) -> RateProfile:
    """
    [-H, H] の等間隔格子上の遷移率を返す。

    points が奇数なら格子は ΔE = 0 を含む。
    """
    _check_cutoff(cutoff_t)
    if points < 2:
        raise InvalidParameterError(f"need at least 2 grid points, got {points}")
    if not (halfwidth > 0.0 and math.isfinite(halfwidth)):
        raise InvalidParameterError(
            f"halfwidth must be positive and finite, got {halfwidth}"
        )
    grid = np.linspace(-halfwidth, halfwidth, points)
    if points % 2 == 1:
        # 対称性を保つため中央を厳密に0にする
        grid[points // 2] = 0.0
    return RateProfile(grid, rate_many(grid, cutoff_t), cutoff_t)
