"""
不変量検査スイートモジュール。

`check` サブコマンドで実行する各スイートを定義する。
"""

import logging
import math

import numpy as np

from pilotwave.bohmian.diagnostics import (
    continuity_residual,
    covariance_check,
    equivariance_check,
    nonlocality_probe,
)
from pilotwave.checks.base import (
    CheckContext,
    CheckResult,
    InvariantCheck,
    require_evaluated,
)
from pilotwave.defaults import (
    CHI_SQUARE_SIGNIFICANCE,
    CONTINUITY_STEP,
    CONTINUITY_TOLERANCE,
    COVARIANCE_RAPIDITY,
    COVARIANCE_TOLERANCE,
    KG_COARSE_STEP,
    KG_ORDER_RANGE,
    KG_STEP,
    KG_TOLERANCE,
    LIOUVILLE_TOLERANCE,
    LOCALITY_TOLERANCE,
)
from pilotwave.errors import NodeError
from pilotwave.probability.density import normalize
from pilotwave.probability.rng import StreamPurpose, stream
from pilotwave.spacetime.four_vector import Configuration, FourVector
from pilotwave.wavepacket.residual import kg_residual_fd, kg_scale

logger = logging.getLogger(__name__)


class KleinGordonCheck(InvariantCheck):
    """
    クライン–ゴルドン残差の検査。

    正規化した差分残差の最大値と、2つの差分幅から測った収束次数を調べる。
    """

    @property
    def name(self) -> str:
        return "kg"

    def run(self, context: CheckContext) -> list[CheckResult]:
        packet = context.packet
        scale = kg_scale(packet)
        fine: list[float] = []
        coarse: list[float] = []
        for row in context.sample_points(0):
            q = Configuration.from_array(row)
            for a in range(packet.n_particles):
                fine.append(kg_residual_fd(packet, q, a, KG_STEP) / scale)
                coarse.append(kg_residual_fd(packet, q, a, KG_COARSE_STEP) / scale)
        residual = max(fine)
        lo, hi = KG_ORDER_RANGE
        if sum(fine) > 0.0 and sum(coarse) > 0.0:
            ratio = sum(coarse) / sum(fine)
            order = math.log(ratio) / math.log(KG_COARSE_STEP / KG_STEP)
        else:
            order = math.nan
        return [
            CheckResult(
                "kg.residual",
                residual,
                KG_TOLERANCE,
                residual < KG_TOLERANCE,
                f"h={KG_STEP}, {len(fine)} evaluations",
            ),
            CheckResult(
                "kg.order",
                order,
                0.5 * (hi - lo),
                lo <= order <= hi,
                f"expected {0.5 * (lo + hi)} between h={KG_COARSE_STEP} and {KG_STEP}",
            ),
        ]


class ContinuityCheck(InvariantCheck):
    """連続の式 Σ_a ∂_{aμ}(|ψ|² v^μ_a) = 0 の検査。"""

    @property
    def name(self) -> str:
        return "continuity"

    def run(self, context: CheckContext) -> list[CheckResult]:
        residuals = []
        points = context.sample_points(1)
        for row in points:
            q = Configuration.from_array(row)
            try:
                residuals.append(
                    continuity_residual(context.packet, q, CONTINUITY_STEP)
                )
            except NodeError:
                logger.debug("skipping a configuration next to a node")
        require_evaluated(self.name, len(residuals), len(points))
        worst = max(residuals)
        return [
            CheckResult(
                "continuity.residual",
                worst,
                CONTINUITY_TOLERANCE,
                worst < CONTINUITY_TOLERANCE,
                f"fd_step={CONTINUITY_STEP}, {len(residuals)} configurations",
            )
        ]


class EquivarianceCheck(InvariantCheck):
    """
    |ψ|² 分布がフローで保存されるかの検査。

    波束を箱で正規化してから、点ごとのLiouville検定とカイ二乗検定を行う。
    """

    @property
    def name(self) -> str:
        return "equivariance"

    def run(self, context: CheckContext) -> list[CheckResult]:
        packet = normalize(context.packet, context.box)
        report = equivariance_check(
            packet,
            context.box,
            context.equivariance_count,
            context.delta_s,
            context.step,
            context.seed,
            context.threads,
        )
        exited = f"exited_fraction={report.exited_fraction:.4f}"
        bins = f"{report.bins_per_axis} bins per axis"
        return [
            CheckResult(
                "equivariance.liouville",
                report.pointwise_max_violation,
                LIOUVILLE_TOLERANCE,
                report.pointwise_max_violation < LIOUVILLE_TOLERANCE,
                f"{report.liouville_samples} interior samples",
            ),
            CheckResult(
                "equivariance.chi_square_p",
                report.chi_square_p,
                CHI_SQUARE_SIGNIFICANCE,
                report.chi_square_p > CHI_SQUARE_SIGNIFICANCE,
                f"{report.survivors} survivors, {bins}, {exited}",
            ),
        ]


class CovarianceCheck(InvariantCheck):
    """ブーストした軌道とブーストした波束の軌道が一致するかの検査。"""

    @property
    def name(self) -> str:
        return "covariance"

    def run(self, context: CheckContext) -> list[CheckResult]:
        initial = Configuration.from_array(context.sample_points(2)[0])
        deviation = covariance_check(
            context.packet,
            initial,
            COVARIANCE_RAPIDITY,
            context.s_span,
            context.step,
        )
        return [
            CheckResult(
                "covariance.deviation",
                deviation,
                COVARIANCE_TOLERANCE,
                deviation < COVARIANCE_TOLERANCE,
                f"rapidity={COVARIANCE_RAPIDITY}, s_span={context.s_span}",
            )
        ]


class NonlocalityCheck(InvariantCheck):
    """
    速度場の非局所性の検査。

    1モードの積状態では他の粒子を動かしても速度が変わらないことを確かめる。
    複数モードの波束では値を報告するだけで合否は付けない。
    """

    @property
    def name(self) -> str:
        return "nonlocality"

    def run(self, context: CheckContext) -> list[CheckResult]:
        packet = context.packet
        if packet.n_particles < 2:
            return [
                CheckResult(
                    "nonlocality.probe", 0.0, None, True, "skipped: single particle"
                )
            ]
        rng = stream(context.seed, 4, StreamPurpose.CHECKS)
        mask = context.box.active_mask
        values = []
        points = context.sample_points(3)
        for row in points:
            q = Configuration.from_array(row)
            shift = FourVector.from_array(rng.normal(size=4) * mask[1])
            try:
                values.append(nonlocality_probe(packet, q, 1, shift, 0))
            except NodeError:
                logger.debug("skipping a displaced configuration next to a node")
        require_evaluated(self.name, len(values), len(points))
        largest = max(values)
        if packet.n_modes == 1:
            return [
                CheckResult(
                    "nonlocality.probe",
                    largest,
                    LOCALITY_TOLERANCE,
                    largest <= LOCALITY_TOLERANCE,
                    "product state: velocities must not react",
                )
            ]
        mean = float(np.mean(values))
        return [
            CheckResult(
                "nonlocality.probe",
                largest,
                None,
                True,
                f"superposition: informational, mean {mean:.3g}",
            )
        ]
