"""
ボーム力学の性質を数値的に確かめるモジュール。

- 連続の式 Σ_a ∂_{aμ}(|ψ|² v^μ_a) = 0
- フローによる |ψ|² 分布の保存（等変性）
- ローレンツ共変性
- 速度場の非局所性
"""

import logging
from dataclasses import dataclass

import numpy as np

from pilotwave.bohmian.flow import TrajectoryStatus, flow_map, integrate_trajectory
from pilotwave.bohmian.velocity import node_threshold, velocity_field, velocity_many
from pilotwave.defaults import (
    HISTOGRAM_BINS,
    INTERIOR_SHRINK,
    JACOBIAN_STEP,
    LIOUVILLE_SAMPLES,
    MIN_SURVIVORS,
    STEP,
)
from pilotwave.errors import InconclusiveError, InvalidParameterError, NodeError
from pilotwave.probability.box import BoolArray, SpacetimeBox
from pilotwave.probability.density import density_many
from pilotwave.probability.histogram import chi_square_against_density
from pilotwave.probability.sampling import sample_ensemble
from pilotwave.spacetime.four_vector import Configuration, FloatArray, FourVector
from pilotwave.spacetime.lorentz import SpatialAxis, boost_array, boost_configuration
from pilotwave.wavepacket.packet import WavePacket

logger = logging.getLogger(__name__)


# ============
# 連続の式
# ============


def characteristic_frequency(packet: WavePacket) -> float:
    """モードのエネルギーの最大値（残差の正規化に使う）。"""
    return float(np.max(packet.energies()))


def continuity_residual(
    packet: WavePacket,
    q: Configuration,
    fd_step: float,
    threshold: float | None = None,
) -> float:
    """
    |Σ_a Σ_μ ∂_{aμ}(|ψ|² v^μ_a)| を中心差分で求め、|ψ|²·ω で割って返す。

    ω はモードのエネルギーの最大値。正しい速度場なら残差は O(fd_step²) で0に近づく。

    Raises:
        NodeError: 差分ステンシルのどこかがノード近傍にある場合
    """
    if not fd_step > 0.0:
        raise InvalidParameterError(
            f"finite-difference step must be positive, got {fd_step}"
        )
    center = q.to_array()
    n = packet.n_particles
    limit = node_threshold(packet) if threshold is None else threshold

    # 行 0 が中心、続いて (a, μ) ごとに +h, -h
    stencil = np.repeat(center[np.newaxis], 1 + 8 * n, axis=0)
    for a in range(n):
        for mu in range(4):
            row = 1 + 2 * (4 * a + mu)
            stencil[row, a, mu] += fd_step
            stencil[row + 1, a, mu] -= fd_step
    velocity, modulus = velocity_many(packet, stencil)
    if np.any(~(modulus > limit)):
        worst = int(np.argmin(modulus))
        raise NodeError(
            "continuity stencil touches a node",
            configuration=Configuration.from_array(stencil[worst]),
            modulus=float(modulus[worst]),
        )
    current = (modulus**2)[:, np.newaxis, np.newaxis] * velocity

    divergence = 0.0
    for a in range(n):
        for mu in range(4):
            row = 1 + 2 * (4 * a + mu)
            divergence += (current[row, a, mu] - current[row + 1, a, mu]) / (
                2.0 * fd_step
            )
    rho = float(modulus[0] ** 2)
    return abs(divergence) / (rho * characteristic_frequency(packet))


# ============
# 等変性
# ============


@dataclass(frozen=True, slots=True)
class EquivarianceReport:
    """
    等変性検査の結果。

    Attributes:
        pointwise_max_violation (float): max |ρ(Φ(q))·det DΦ(q)/ρ(q) - 1|
        chi_square_p (float): 内部に残ったサンプルのカイ二乗p値
        exited_fraction (float): 比較領域を出た（またはノードで止まった）割合
        survivors (int): 比較領域に残ったサンプル数
        liouville_samples (int): 点ごとの検定に使ったサンプル数
        bins_per_axis (int): カイ二乗検定で実際に使った活性軸あたりのビン数
    """

    pointwise_max_violation: float
    chi_square_p: float
    exited_fraction: float
    survivors: int
    liouville_samples: int
    bins_per_axis: int


def _check_flow_axes(packet: WavePacket, box: SpacetimeBox) -> None:
    # 非活性軸方向の運動量があると軌道が固定面を離れる
    mask = box.active_mask
    if not mask[:, 0].all():
        raise InvalidParameterError("every particle needs an active time axis")
    spatial = packet.momenta[..., 1:]
    inactive = ~mask[np.newaxis, :, 1:]
    if np.any(np.abs(spatial[np.broadcast_to(inactive, spatial.shape)]) > 0.0):
        raise InvalidParameterError(
            "packet has momentum along an axis the box leaves inactive"
        )


def _flow_jacobian_det(
    packet: WavePacket,
    box: SpacetimeBox,
    starts: FloatArray,
    delta_s: float,
    step: float,
    jacobian_step: float,
    threads: int,
) -> tuple[FloatArray, FloatArray, BoolArray]:
    # 活性座標について中心差分でDΦを作り、(終点, det, 状態) を返す
    count = starts.shape[0]
    n = box.n_particles
    columns = [j for j, _ in box.active_axes()]
    d = len(columns)
    flat = starts.reshape(count, 4 * n)
    batch = np.repeat(flat[:, np.newaxis], 1 + 2 * d, axis=1)
    for c, j in enumerate(columns):
        batch[:, 1 + 2 * c, j] += jacobian_step
        batch[:, 2 + 2 * c, j] -= jacobian_step
    finals, status = flow_map(
        packet, batch.reshape(-1, n, 4), delta_s, step, threads=threads
    )
    finals = finals.reshape(count, 1 + 2 * d, 4 * n)
    status = status.reshape(count, 1 + 2 * d)
    jacobian = np.empty((count, d, d), dtype=np.float64)
    for c in range(d):
        diff = finals[:, 1 + 2 * c, columns] - finals[:, 2 + 2 * c, columns]
        jacobian[:, :, c] = diff / (2.0 * jacobian_step)
    ok = np.all(status == TrajectoryStatus.COMPLETED, axis=1)
    return finals[:, 0].reshape(count, n, 4), np.linalg.det(jacobian), ok


def equivariance_check(
    packet: WavePacket,
    box: SpacetimeBox,
    count: int,
    delta_s: float,
    step: float = STEP,
    seed: int = 0,
    threads: int = 1,
    liouville_samples: int = LIOUVILLE_SAMPLES,
    bins_per_axis: int = HISTOGRAM_BINS,
    shrink: float = INTERIOR_SHRINK,
    jacobian_step: float = JACOBIAN_STEP,
) -> EquivarianceReport:
    """
    ボーム流が |ψ|² 分布を保存することを2通りに確かめる。

    1. 点ごとのLiouville検定: 始点と終点がともに内部領域にあるサンプルで
       ρ(Φ_Δs(q))·det DΦ_Δs(q)/ρ(q) - 1 を求める。DΦ は流した軌道の中心差分。
    2. 統計検定: |ψ|² から引いたアンサンブルを流し、内部領域に残った点を
       内部領域に制限した |ψ|² とカイ二乗検定で比べる。

    内部領域は箱の各活性軸の幅を shrink だけ縮めたもの。変位が余白を超えると
    箱の外から入るはずの点が欠けるので、その場合は警告を出す。

    Parameters:
        packet (WavePacket): 正規化した波束
        box (SpacetimeBox): サンプリングの箱
        count (int): アンサンブルのサイズ
        delta_s (float): 流すパラメータ幅
        step (float): 積分ステップ
        seed (int): サンプリングのシード
        threads (int): スレッド数（結果には影響しない）
        liouville_samples (int): 点ごとの検定のサンプル数
        bins_per_axis (int): 活性軸あたりのビン数の上限（点数に合わせて減らす）
        shrink (float): 内部領域の縮小率
        jacobian_step (float): ヤコビアンの差分幅

    Returns:
        EquivarianceReport: 検査結果

    Raises:
        InconclusiveError: 内部に残ったサンプルが少なすぎてカイ二乗検定が組めない場合
    """
    box.check_particles(packet.n_particles)
    _check_flow_axes(packet, box)
    interior = box.interior(shrink)
    ensemble = sample_ensemble(packet, box, count, seed, threads=threads)
    finals, status = flow_map(packet, ensemble.points, delta_s, step, threads=threads)

    completed = status == TrajectoryStatus.COMPLETED
    survived = completed & interior.contains(finals)
    survivors = int(np.count_nonzero(survived))
    exited_fraction = 1.0 - survivors / count

    displacement = np.abs(finals[completed] - ensemble.points[completed])
    flat_shift = displacement.reshape(-1, 4 * box.n_particles).max(axis=0, initial=0.0)
    for j, axis in box.active_axes():
        margin = 0.5 * shrink * axis.length
        if flat_shift[j] > margin:
            logger.warning(
                "axis %d moved up to %.3g, beyond the interior margin %.3g; "
                "the statistical test may be biased",
                j,
                flat_shift[j],
                margin,
            )

    if survivors < MIN_SURVIVORS:
        raise InconclusiveError(
            f"only {survivors} of {count} samples stayed in the comparison region "
            f"(need {MIN_SURVIVORS})"
        )
    chi_square = chi_square_against_density(
        finals[survived], packet, interior, bins_per_axis
    )

    # 点ごとの検定は始点・終点とも内部にあるサンプルから取る
    candidates = ensemble.points[survived & interior.contains(ensemble.points)]
    starts = candidates[:liouville_samples]
    if starts.shape[0] == 0:
        raise InconclusiveError("no interior samples for the pointwise test")
    ends, det, ok = _flow_jacobian_det(
        packet, box, starts, delta_s, step, jacobian_step, threads
    )
    usable = ok & interior.contains(ends)
    ratio = density_many(packet, ends[usable]) * det[usable]
    violation = np.abs(ratio / density_many(packet, starts[usable]) - 1.0)
    pointwise = float(violation.max(initial=0.0))

    report = EquivarianceReport(
        pointwise,
        chi_square.p_value,
        exited_fraction,
        survivors,
        int(np.count_nonzero(usable)),
        chi_square.bins_per_axis,
    )
    logger.info(
        "equivariance: liouville %.3e over %d samples, chi-square p=%.4f, "
        "exited %.3f",
        report.pointwise_max_violation,
        report.liouville_samples,
        report.chi_square_p,
        report.exited_fraction,
    )
    return report


# ============
# 共変性と非局所性
# ============


def covariance_check(
    packet: WavePacket,
    initial: Configuration,
    rapidity: float,
    s_span: tuple[float, float],
    step: float = STEP,
    axis: SpatialAxis | str = SpatialAxis.X,
    threshold: float | None = None,
) -> float:
    """
    ブーストした軌道とブーストした波束の軌道の差の上限を返す。

    s はスカラーなので、同じ s の状態どうしを比べる。

    Returns:
        float: max_s max_{a,μ} |Λ X(s) - X'(s)|
    """
    original = integrate_trajectory(packet, initial, s_span, step, threshold)
    boosted = integrate_trajectory(
        packet.boosted(rapidity, axis),
        boost_configuration(initial, rapidity, axis),
        s_span,
        step,
        threshold,
    )
    common = min(len(original), len(boosted))
    expected = boost_array(original.states[:common], rapidity, axis)
    return float(np.max(np.abs(expected - boosted.states[:common])))


def nonlocality_probe(
    packet: WavePacket,
    q: Configuration,
    moved_particle: int,
    displacement: FourVector,
    observed_particle: int,
    threshold: float | None = None,
) -> float:
    """
    粒子 moved_particle を displacement だけ動かしたときの、
    粒子 observed_particle の速度の変化の大きさ（4成分のユークリッドノルム）。

    1モードの積状態では0、エンタングルした波束では一般に0でない。

    Raises:
        NodeError: どちらかの配置がノード近傍にある場合
    """
    packet.check_particle(moved_particle)
    packet.check_particle(observed_particle)
    moved = q.points[moved_particle]
    shifted = q.replace_point(
        moved_particle,
        FourVector.from_array(moved.as_array() + displacement.as_array()),
    )
    before = velocity_field(packet, q, threshold).velocities[observed_particle]
    after = velocity_field(packet, shifted, threshold).velocities[observed_particle]
    return float(np.linalg.norm(after.as_array() - before.as_array()))
