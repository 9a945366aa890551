"""
時空の確率密度モジュール。

dP = |ψ|² d⁴x_1⋯d⁴x_n を時空の箱の上で扱う。
正規化・検出時刻を固定した条件付き密度・周辺正規化因子 N_t を提供する。
確率はすべて利用者が与えた箱に対する相対値である。
"""

import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from pilotwave.defaults import (
    GAUSS_POINTS_1D,
    GAUSS_POINTS_3D,
    MIN_MONTE_CARLO_SAMPLES,
    MONTE_CARLO_SAMPLES,
    SAMPLING_BATCH,
)
from pilotwave.errors import (
    DegenerateConditionError,
    DegeneratePacketError,
    DimensionError,
    InvalidParameterError,
)
from pilotwave.probability.box import SpacetimeBox
from pilotwave.probability.quadrature import (
    AxisRule,
    SeparableQuadrature,
    check_resolution,
    tensor_integrate,
)
from pilotwave.probability.rng import StreamPurpose, stream
from pilotwave.spacetime.four_vector import MINKOWSKI, Configuration, FloatArray
from pilotwave.wavepacket.packet import WavePacket

logger = logging.getLogger(__name__)


class IntegrationMethod(StrEnum):
    """箱上の積分方法。"""

    TENSOR = "tensor-quadrature"
    MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True, slots=True)
class DensityReport:
    """
    積分結果とその誤差見積もり。

    Attributes:
        value (float): 積分値（非負）
        estimated_error (float): 誤差の見積もり（非負）
        evaluation_count (int): 被積分関数の評価点数
    """

    value: float
    estimated_error: float
    evaluation_count: int

    def __post_init__(self) -> None:
        if not (self.value >= 0.0 and self.estimated_error >= 0.0):
            raise InvalidParameterError(
                f"report must be nonnegative, got value={self.value}, "
                f"error={self.estimated_error}"
            )


def default_resolution(box: SpacetimeBox) -> int:
    """1+1D なら64点、それ以外は16点。"""
    return GAUSS_POINTS_1D if box.is_one_plus_one else GAUSS_POINTS_3D


def density(packet: WavePacket, q: Configuration) -> float:
    """
    配置 q での確率密度 |ψ(q)|² を返す（d⁴x_1⋯d⁴x_n あたり）。

    Raises:
        DimensionError: 配置の粒子数が一致しない場合
    """
    return abs(packet.evaluate(q)) ** 2


def density_many(packet: WavePacket, points: FloatArray) -> FloatArray:
    """形状 (..., n, 4) の配置で |ψ|² を一括評価する。"""
    return np.asarray(np.abs(packet.evaluate_many(points)) ** 2, dtype=np.float64)


# ============
# 求積則の組み立て
# ============


def _axis_rules(
    box: SpacetimeBox, points: int, times: Sequence[float] | None = None
) -> list[AxisRule]:
    # 活性軸はGauss–Legendre、非活性軸は0に固定。times を与えると時間軸を固定する
    rules = []
    for j, axis in enumerate(box.axes):
        a, mu = divmod(j, 4)
        if mu == 0 and times is not None:
            rules.append(AxisRule.pinned(times[a]))
        elif axis is None:
            rules.append(AxisRule.pinned(0.0))
        else:
            rules.append(AxisRule.gauss_legendre(axis, points))
    return rules


def _with_halving(
    compute: Callable[[int], tuple[float, int]], resolution: int
) -> DensityReport:
    # 誤差は点数を半分にした結果との差で見積もる
    value, count = compute(resolution)
    coarse, _ = compute(max(1, resolution // 2))
    return DensityReport(max(value, 0.0), abs(value - coarse), count)


def _check_times(packet: WavePacket, times: Sequence[float]) -> None:
    if len(times) != packet.n_particles:
        raise DimensionError(
            f"expected {packet.n_particles} detection times, got {len(times)}"
        )
    for t in times:
        if not math.isfinite(t):
            raise InvalidParameterError(f"detection time must be finite, got {t}")


def _separable(
    packet: WavePacket, box: SpacetimeBox, times: Sequence[float] | None = None
) -> Callable[[int], tuple[float, int]]:
    def compute(points: int) -> tuple[float, int]:
        quadrature = SeparableQuadrature(packet, _axis_rules(box, points, times))
        return quadrature.integral(), quadrature.evaluation_count

    return compute


# ============
# 箱上の積分
# ============


def box_integral(
    packet: WavePacket,
    box: SpacetimeBox,
    method: IntegrationMethod | str = IntegrationMethod.TENSOR,
    resolution: int | None = None,
    seed: int = 0,
    threads: int = 1,
) -> DensityReport:
    """
    ∫_box |ψ|² d⁴x_1⋯d⁴x_n を近似する。

    テンソル積求積は決定的で、誤差は点数を半分にした結果との差。
    モンテカルロは (seed, バッチ番号) ごとの独立な乱数ストリームを使うので、
    threads に関係なく同じ値になる。誤差は標準誤差。

    Parameters:
        packet (WavePacket): 波束
        box (SpacetimeBox): 積分領域
        method (IntegrationMethod | str): 積分方法
        resolution (int | None): 軸あたりの点数、またはモンテカルロのサンプル数
        seed (int): モンテカルロのシード
        threads (int): モンテカルロのスレッド数（速度のみに影響）

    Returns:
        DensityReport: 積分値と誤差

    Raises:
        InvalidParameterError: 解像度が最小値（2点/軸、10サンプル）未満の場合
    """
    box.check_particles(packet.n_particles)
    method = IntegrationMethod(method)
    if method is IntegrationMethod.MONTE_CARLO:
        samples = MONTE_CARLO_SAMPLES if resolution is None else resolution
        return _monte_carlo(packet, box, samples, seed, threads)
    points = default_resolution(box) if resolution is None else resolution
    check_resolution(points)
    report = _with_halving(_separable(packet, box), points)
    logger.debug(
        "box integral %.12g (error %.3g, %d points/axis)",
        report.value,
        report.estimated_error,
        points,
    )
    return report


def _monte_carlo(
    packet: WavePacket, box: SpacetimeBox, samples: int, seed: int, threads: int
) -> DensityReport:
    if samples < MIN_MONTE_CARLO_SAMPLES:
        raise InvalidParameterError(
            f"monte-carlo needs at least {MIN_MONTE_CARLO_SAMPLES} samples, "
            f"got {samples}"
        )
    starts = range(0, samples, SAMPLING_BATCH)

    def batch(index: int) -> tuple[float, float]:
        size = min(SAMPLING_BATCH, samples - starts[index])
        rng = stream(seed, index, StreamPurpose.MONTE_CARLO)
        values = density_many(packet, box.uniform(rng, size))
        return float(values.sum()), float(np.square(values).sum())

    indices = range(len(starts))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            sums = list(executor.map(batch, indices))
    else:
        sums = [batch(i) for i in indices]

    # バッチ順に足すので和の順序は固定
    total = sum(s for s, _ in sums)
    total_sq = sum(s2 for _, s2 in sums)
    mean = total / samples
    variance = max(total_sq / samples - mean * mean, 0.0)
    volume = box.volume
    return DensityReport(
        mean * volume, volume * math.sqrt(variance / samples), samples
    )


def normalize(
    packet: WavePacket, box: SpacetimeBox, resolution: int | None = None
) -> WavePacket:
    """
    箱上で ∫|ψ|² = 1 となるように振幅を一様に拡大縮小した波束を返す。

    Raises:
        DegeneratePacketError: 積分が消える場合
    """
    report = box_integral(packet, box, resolution=resolution)
    if not report.value > 0.0:
        raise DegeneratePacketError(
            f"cannot normalize: box integral is {report.value}"
        )
    return packet.scaled(1.0 / math.sqrt(report.value))


# ============
# 条件付き密度と周辺分布
# ============


def marginal_N(
    packet: WavePacket,
    times: Sequence[float],
    box: SpacetimeBox,
    resolution: int | None = None,
) -> DensityReport:
    """
    検出時刻 t_1, …, t_n での正規化因子 N = ∫|ψ(𝐱_1,t_1,…,𝐱_n,t_n)|² d³x を返す。

    box の時間範囲は使わず、空間範囲だけで積分する。

    Parameters:
        packet (WavePacket): 波束
        times (Sequence[float]): 粒子ごとの検出時刻
        box (SpacetimeBox): 空間範囲を与える箱
        resolution (int | None): 軸あたりの点数

    Returns:
        DensityReport: N とその誤差
    """
    box.check_particles(packet.n_particles)
    _check_times(packet, times)
    points = default_resolution(box) if resolution is None else resolution
    check_resolution(points)
    return _with_halving(_separable(packet, box, times), points)


def _points_at_times(
    box: SpacetimeBox, times: Sequence[float], spatial: FloatArray
) -> FloatArray:
    # (M, d) の活性空間座標を (M, n, 4) の配置に埋め込む
    flat = np.zeros((spatial.shape[0], 4 * box.n_particles), dtype=np.float64)
    for a, t in enumerate(times):
        flat[:, 4 * a] = t
    columns = [j for j, _ in box.active_axes() if j % 4 != 0]
    flat[:, columns] = spatial
    return flat.reshape(spatial.shape[0], box.n_particles, 4)


def conditional_density(
    packet: WavePacket,
    times: Sequence[float],
    q_spatial: Sequence[Sequence[float]],
    normalization: float | DensityReport,
) -> float:
    """
    検出時刻を固定した3次元空間の条件付き密度 |ψ|²/N を返す。

    Parameters:
        packet (WavePacket): 波束
        times (Sequence[float]): 粒子ごとの検出時刻
        q_spatial (Sequence[Sequence[float]]): 粒子ごとの空間座標（1〜3成分）
        normalization (float | DensityReport): marginal_N で求めた N

    Raises:
        DegenerateConditionError: N ≤ 0 の場合
    """
    _check_times(packet, times)
    n_value = (
        normalization.value
        if isinstance(normalization, DensityReport)
        else float(normalization)
    )
    if not n_value > 0.0:
        raise DegenerateConditionError(
            f"normalization factor must be positive, got {n_value}"
        )
    if len(q_spatial) != packet.n_particles:
        raise DimensionError(
            f"expected {packet.n_particles} spatial points, got {len(q_spatial)}"
        )
    points = np.zeros((packet.n_particles, 4), dtype=np.float64)
    for a, (t, position) in enumerate(zip(times, q_spatial, strict=True)):
        if not 1 <= len(position) <= 3:
            raise DimensionError(
                f"spatial point {a} has {len(position)} components"
            )
        points[a, 0] = t
        points[a, 1 : 1 + len(position)] = position
    return float(np.abs(packet.evaluate_many(points)) ** 2) / n_value


def conditional_integral(
    packet: WavePacket,
    times: Sequence[float],
    box: SpacetimeBox,
    resolution: int | None = None,
) -> DensityReport:
    """
    条件付き密度を空間範囲で積分する（正しければ1）。

    N は分離型の求積で、分子は一般のテンソル格子で独立に求める。
    """
    box.check_particles(packet.n_particles)
    _check_times(packet, times)
    points = default_resolution(box) if resolution is None else resolution
    check_resolution(points)
    normalization = marginal_N(packet, times, box, points)
    if not normalization.value > 0.0:
        raise DegenerateConditionError(
            f"normalization factor must be positive, got {normalization.value}"
        )
    intervals = [axis for j, axis in box.active_axes() if j % 4 != 0]

    def integrand(spatial: FloatArray) -> FloatArray:
        return density_many(packet, _points_at_times(box, times, spatial))

    value, count = tensor_integrate(integrand, intervals, points)
    return DensityReport(
        value / normalization.value,
        normalization.estimated_error / normalization.value,
        count,
    )


def marginal_time_integral(
    packet: WavePacket, box: SpacetimeBox, resolution: int | None = None
) -> DensityReport:
    """
    時間窓にわたる ∫ N_{t_1…t_n} dt_1⋯dt_n を返す。

    正規化済みの波束では1になる（検出時刻の周辺確率）。
    """
    box.check_particles(packet.n_particles)
    points = default_resolution(box) if resolution is None else resolution
    check_resolution(points)
    windows = [bounds.t for bounds in box.particles]

    def integrand(times: FloatArray) -> FloatArray:
        return np.array(
            [marginal_N(packet, list(row), box, points).value for row in times],
            dtype=np.float64,
        )

    def compute(time_points: int) -> tuple[float, int]:
        return tensor_integrate(integrand, windows, time_points)

    return _with_halving(compute, points)


# ============
# 期待値
# ============


def _normalized_quadrature(
    packet: WavePacket, box: SpacetimeBox, resolution: int | None
) -> tuple[SeparableQuadrature, float]:
    box.check_particles(packet.n_particles)
    points = default_resolution(box) if resolution is None else resolution
    check_resolution(points)
    quadrature = SeparableQuadrature(packet, _axis_rules(box, points))
    norm = quadrature.integral()
    if not norm > 0.0:
        raise DegeneratePacketError(f"box integral is {norm}")
    return quadrature, norm


def position_expectation(
    packet: WavePacket, box: SpacetimeBox, resolution: int | None = None
) -> FloatArray:
    """
    箱上の時空位置の期待値 ⟨x^μ_a⟩（形状 (n, 4)）。

    時間座標も掛け算演算子として扱う。非活性軸は0。
    """
    quadrature, norm = _normalized_quadrature(packet, box, resolution)
    result = np.zeros((packet.n_particles, 4), dtype=np.float64)
    for j, _ in box.active_axes():
        a, mu = divmod(j, 4)
        pair = quadrature.pair_matrix(moment_axis=j)
        result[a, mu] = quadrature.quadratic_form(pair).real / norm
    return result


def momentum_expectation(
    packet: WavePacket, box: SpacetimeBox, resolution: int | None = None
) -> FloatArray:
    """
    箱上の4元運動量の期待値 ⟨p^μ_a⟩（反変、形状 (n, 4)）。

    p̂_ν = i∂_ν を使う。単一平面波なら p^μ そのもの。
    """
    quadrature, norm = _normalized_quadrature(packet, box, resolution)
    pair = quadrature.pair_matrix()
    c = packet.amplitudes
    weighted = np.einsum("k,kam->kam", c, packet.covariant_momenta)
    covariant = np.einsum("kam,kl,l->am", weighted, pair, c.conj()).real / norm
    return MINKOWSKI.flip_arrays(np.asarray(covariant, dtype=np.float64))
