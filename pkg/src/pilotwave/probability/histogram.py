"""
ヒストグラムとカイ二乗検定モジュール。

ビンごとの |ψ|² の質量を分離型求積で厳密に求め、
アンサンブルのヒストグラムと比較する。
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy import stats

from pilotwave.defaults import (
    BIN_TARGET_COUNT,
    MAX_HISTOGRAM_CELLS,
    MIN_EXPECTED_COUNT,
)
from pilotwave.errors import InconclusiveError, InvalidParameterError
from pilotwave.probability.box import Interval, SpacetimeBox
from pilotwave.probability.quadrature import AxisRule, SeparableQuadrature
from pilotwave.spacetime.four_vector import FloatArray
from pilotwave.wavepacket.packet import WavePacket

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class ChiSquareResult:
    """
    カイ二乗適合度検定の結果。

    Attributes:
        statistic (float): 検定統計量
        p_value (float): p値
        bins_used (int): 統合後のビン数
        count (int): 領域内のサンプル数
        bins_per_axis (int): 実際に使った活性軸あたりのビン数
    """

    statistic: float
    p_value: float
    bins_used: int
    count: int
    bins_per_axis: int


def bin_edges(region: SpacetimeBox, bins_per_axis: int) -> list[FloatArray]:
    """活性軸ごとの等間隔ビン境界。"""
    if bins_per_axis < 1:
        raise InvalidParameterError(
            f"bins per axis must be positive, got {bins_per_axis}"
        )
    return [
        np.linspace(axis.lo, axis.hi, bins_per_axis + 1)
        for _, axis in region.active_axes()
    ]


def bin_probabilities(
    packet: WavePacket,
    region: SpacetimeBox,
    bins_per_axis: int,
    resolution: int = 8,
) -> tuple[FloatArray, list[FloatArray]]:
    """
    活性軸のビンごとに ∫_bin |ψ|² を求める。

    各軸・各ビンの (K, K) 行列を作り、ビンの組ごとに積を取る。

    Parameters:
        packet (WavePacket): 波束
        region (SpacetimeBox): ヒストグラムの領域
        bins_per_axis (int): 活性軸あたりのビン数
        resolution (int): ビンあたりのGauss–Legendre点数

    Returns:
        tuple[FloatArray, list[FloatArray]]: (活性軸の数だけ次元を持つ質量配列, ビン境界)
    """
    region.check_particles(packet.n_particles)
    edges = bin_edges(region, bins_per_axis)
    pinned = [AxisRule.pinned(0.0) for _ in region.axes]
    quadrature = SeparableQuadrature(packet, pinned)
    # 0に固定した非活性軸の行列は全成分1なので掛けなくてよい
    k = packet.n_modes
    product = np.ones((k, k), dtype=np.complex128)
    active = 0
    for j, axis in enumerate(region.axes):
        if axis is None:
            continue
        per_bin = np.stack(
            [
                quadrature.axis_matrix(
                    j, AxisRule.gauss_legendre(Interval(lo, hi), resolution)
                )
                for lo, hi in zip(edges[active][:-1], edges[active][1:], strict=True)
            ]
        )
        # (..., K, K) × (B, K, K) → (..., B, K, K)
        product = product[..., np.newaxis, :, :] * per_bin
        active += 1
    c = packet.amplitudes
    masses = np.einsum("...kl,k,l->...", product, c, c.conj()).real
    return np.maximum(np.asarray(masses, dtype=np.float64), 0.0), edges


def active_coordinates(points: FloatArray, region: SpacetimeBox) -> FloatArray:
    """(N, n, 4) の配置から活性軸の座標だけを (N, d) で取り出す。"""
    arr = np.asarray(points, dtype=np.float64)
    flat = arr.reshape(arr.shape[0], 4 * region.n_particles)
    return flat[:, [j for j, _ in region.active_axes()]]


def histogram_counts(
    points: FloatArray, region: SpacetimeBox, edges: list[FloatArray]
) -> FloatArray:
    """領域内の点をビンごとに数える（領域外の点は数えない）。"""
    inside = region.contains(points)
    coords = active_coordinates(np.asarray(points)[inside], region)
    counts, _ = np.histogramdd(coords, bins=edges)
    return np.asarray(counts, dtype=np.float64)


def fit_bins_per_axis(
    requested: int, count: int, dimensions: int, n_modes: int
) -> int:
    """
    点数と活性軸の数から、検定できる活性軸あたりのビン数を選ぶ。

    ビンあたりの平均度数が BIN_TARGET_COUNT 以上で、質量配列の大きさ
    (ビン数 × K²) が MAX_HISTOGRAM_CELLS 以下になる最大の値を返す。
    2未満を返したら検定できるビン分けは無い。

    Parameters:
        requested (int): 軸あたりのビン数の上限
        count (int): 領域内の点数
        dimensions (int): 活性軸の数
        n_modes (int): 波束のモード数 K

    Returns:
        int: 軸あたりのビン数
    """
    bins = requested
    while bins >= 2 and (
        bins**dimensions * BIN_TARGET_COUNT > count
        or bins**dimensions * n_modes * n_modes > MAX_HISTOGRAM_CELLS
    ):
        bins -= 1
    return bins


def chi_square_against_density(
    points: FloatArray,
    packet: WavePacket,
    region: SpacetimeBox,
    bins_per_axis: int,
    resolution: int = 8,
) -> ChiSquareResult:
    """
    点の分布が領域に制限した |ψ|² に従うかをカイ二乗検定する。

    軸あたりのビン数は bins_per_axis を上限に fit_bins_per_axis で選び直す。
    期待度数が MIN_EXPECTED_COUNT 未満のビンは1つにまとめる。

    Raises:
        InvalidParameterError: 領域内に点が無い、または質量が0の場合
        InconclusiveError: 点が少なすぎて2つ以上のビンに分けられない場合
    """
    if bins_per_axis < 1:
        raise InvalidParameterError(
            f"bins per axis must be positive, got {bins_per_axis}"
        )
    count = int(np.count_nonzero(region.contains(points)))
    if count == 0:
        raise InvalidParameterError("nothing to compare: no points in the region")
    dimensions = int(np.count_nonzero(region.active_mask))
    bins = fit_bins_per_axis(bins_per_axis, count, dimensions, packet.n_modes)
    if bins < 2:
        raise InconclusiveError(
            f"too few points for a chi-square test: {count} points "
            f"over {dimensions} active axes"
        )
    if bins < bins_per_axis:
        logger.info(
            "using %d bins per axis instead of %d for %d points over %d axes",
            bins,
            bins_per_axis,
            count,
            dimensions,
        )

    masses, edges = bin_probabilities(packet, region, bins, resolution)
    observed = histogram_counts(points, region, edges).ravel()
    total_mass = float(masses.sum())
    if not total_mass > 0.0:
        raise InvalidParameterError(f"nothing to compare: region mass {total_mass}")
    expected = masses.ravel() / total_mass * count

    small = expected < MIN_EXPECTED_COUNT
    f_obs = observed[~small]
    f_exp = expected[~small]
    if small.any():
        f_obs = np.append(f_obs, observed[small].sum())
        f_exp = np.append(f_exp, expected[small].sum())
    if f_obs.size < 2:
        raise InconclusiveError(
            f"too few points for a chi-square test: {count} points in one pooled bin"
        )
    # 数値誤差で合計がずれないように揃える
    f_exp = f_exp * (f_obs.sum() / f_exp.sum())
    result = stats.chisquare(f_obs, f_exp)
    return ChiSquareResult(
        float(result.statistic), float(result.pvalue), int(f_obs.size), count, bins
    )
