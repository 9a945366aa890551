"""
ボーム軌道の積分モジュール。

dX^μ_a/ds = v^μ_a(X_1(s), …, X_n(s)) を全 4n 座標について同時に、
固定ステップの古典的4次ルンゲ–クッタ法で積分する。

`EnsembleFlow` は多数の配置をまとめて進める。各メンバーは状態を持ち、
ノードに近づいたメンバーはその場で止まり、領域を出たメンバーは
出た点を記録して止まる。止まったメンバーは以降のステップで動かない。
"""

import logging
import math
from collections.abc import Callable, Iterator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import IntEnum

import numpy as np
import numpy.typing as npt

from pilotwave.bohmian.velocity import node_threshold, velocity_field, velocity_many
from pilotwave.defaults import MONITOR_INTERVAL, MONITOR_TOLERANCE, STEP
from pilotwave.errors import InvalidParameterError, NumericalBlowupError
from pilotwave.probability.box import BoolArray, SpacetimeBox
from pilotwave.spacetime.four_vector import Configuration, FloatArray
from pilotwave.wavepacket.packet import WavePacket

logger = logging.getLogger(__name__)

FLOW_BATCH = 1024  # 並列化の単位（スレッド数に依存しない）

IntArray = npt.NDArray[np.intp]


class TrajectoryStatus(IntEnum):
    """軌道の終了状態。"""

    COMPLETED = 0
    HALTED_AT_NODE = 1
    HALTED_OUT_OF_DOMAIN = 2

    @property
    def label(self) -> str:
        """CSVなどに書き出す名前（例: ``halted-at-node``）。"""
        return self.name.lower().replace("_", "-")


@dataclass(frozen=True)
class Trajectory:
    """
    1本のボーム軌道。

    Attributes:
        s_values (FloatArray): 単調増加のパラメータ値（形状 (m,)）
        states (FloatArray): 各 s での配置（形状 (m, n, 4)）
        status (TrajectoryStatus): 終了状態
    """

    s_values: FloatArray
    states: FloatArray
    status: TrajectoryStatus

    def __post_init__(self) -> None:
        if self.s_values.shape[0] != self.states.shape[0]:
            raise InvalidParameterError(
                f"{self.s_values.shape[0]} s values for {self.states.shape[0]} states"
            )
        if np.any(np.diff(self.s_values) <= 0.0):
            raise InvalidParameterError("s values must be strictly increasing")

    def __len__(self) -> int:
        return int(self.s_values.shape[0])

    @property
    def final(self) -> Configuration:
        """最後に記録した配置。"""
        return Configuration.from_array(self.states[-1])

    def configurations(self) -> list[Configuration]:
        """記録した配置のリスト。"""
        return [Configuration.from_array(state) for state in self.states]


def step_count(delta_s: float, step: float) -> int:
    """|Δs| を step 以下の等幅に分けるステップ数。"""
    if not step > 0.0 or not math.isfinite(step):
        raise InvalidParameterError(f"step must be positive and finite, got {step}")
    if not math.isfinite(delta_s):
        raise InvalidParameterError(f"parameter span must be finite, got {delta_s}")
    # 丸め誤差で1ステップ余分に増えないようにする
    return math.ceil(abs(delta_s) / step * (1.0 - 1e-12))


class EnsembleFlow:
    """
    配置のアンサンブルをまとめて進める固定ステップRK4積分器。

    - 速度場はステップごとに全アクティブメンバーについて一括評価する
    - RK4のどの段でもノードに入ったメンバーは進めずに止める
    - 領域（domain）を出たメンバーは出た状態を記録してから止める
    - 数ステップごとにステップ半減モニタで局所誤差を調べ、大きければ警告する
      （ステップ幅は変えない）

    Attributes:
        packet (WavePacket): 波束
        threshold (float): ノードしきい値
        domain (SpacetimeBox | None): 積分領域（None なら無制限）
    """

    def __init__(
        self,
        packet: WavePacket,
        initial: FloatArray,
        threshold: float | None = None,
        domain: SpacetimeBox | None = None,
        record: bool = False,
        monitor_interval: int = MONITOR_INTERVAL,
        monitor_tolerance: float = MONITOR_TOLERANCE,
    ) -> None:
        points = np.array(initial, dtype=np.float64)
        if points.ndim != 3 or points.shape[1:] != (packet.n_particles, 4):
            raise InvalidParameterError(
                f"initial states must have shape (N, {packet.n_particles}, 4), "
                f"got {points.shape}"
            )
        self.packet = packet
        self.threshold = node_threshold(packet) if threshold is None else threshold
        self.domain = domain
        self.monitor_interval = monitor_interval
        self.monitor_tolerance = monitor_tolerance

        self._cur: FloatArray = points
        self._status = np.full(
            points.shape[0], TrajectoryStatus.COMPLETED, dtype=np.int8
        )
        self._steps_taken = 0
        self._h = 0.0
        self._record = record
        self._start = points.copy() if record else points[:0].copy()
        # ステップごとに (進めたメンバー, その新しい状態) だけを持つ
        self._history: list[tuple[IntArray, FloatArray]] = []
        self._lengths = np.ones(points.shape[0], dtype=np.int64)

        # 初期配置がノード上にあるメンバーは動かさない
        _, modulus = velocity_many(packet, points)
        self._status[~(modulus > self.threshold)] = TrajectoryStatus.HALTED_AT_NODE

    # ============
    # 状態
    # ============

    @property
    def points(self) -> FloatArray:
        """現在の配置（形状 (N, n, 4)）。"""
        return self._cur

    @property
    def status(self) -> npt.NDArray[np.int8]:
        """メンバーごとの TrajectoryStatus の値。"""
        return self._status

    @property
    def active(self) -> BoolArray:
        """まだ進めるメンバーなら True。"""
        return np.asarray(self._status == TrajectoryStatus.COMPLETED, dtype=np.bool_)

    @property
    def steps_taken(self) -> int:
        """実行したステップ数。"""
        return self._steps_taken

    @property
    def recorded_rows(self) -> int:
        """記録した配置の数（初期配置を含む）。止まったメンバーは増えない。"""
        if not self._record:
            return 0
        return self._start.shape[0] + sum(rows.shape[0] for _, rows in self._history)

    def status_counts(self) -> dict[TrajectoryStatus, int]:
        """状態ごとのメンバー数。"""
        return {
            status: int(np.count_nonzero(self._status == status))
            for status in TrajectoryStatus
        }

    # ============
    # 積分
    # ============

    def _velocity(self, points: FloatArray) -> tuple[FloatArray, BoolArray]:
        velocity, modulus = velocity_many(self.packet, points)
        return velocity, ~(modulus > self.threshold)

    def _rk4(self, x: FloatArray, h: float) -> tuple[FloatArray, BoolArray]:
        k1, n1 = self._velocity(x)
        k2, n2 = self._velocity(x + 0.5 * h * k1)
        k3, n3 = self._velocity(x + 0.5 * h * k2)
        k4, n4 = self._velocity(x + h * k3)
        nodes = n1 | n2 | n3 | n4
        return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), nodes

    def _monitor(self, x: FloatArray, h: float) -> None:
        full, nodes_full = self._rk4(x, h)
        half, nodes_half = self._rk4(x, 0.5 * h)
        twice, nodes_twice = self._rk4(half, 0.5 * h)
        usable = ~(nodes_full | nodes_half | nodes_twice)
        if not usable.any():
            return
        error = float(np.max(np.abs(full[usable] - twice[usable])))
        if error > self.monitor_tolerance:
            logger.warning(
                "step-halving local error %.3e exceeds %.1e at step %d (h=%g)",
                error,
                self.monitor_tolerance,
                self._steps_taken,
                h,
            )

    def step(self, h: float) -> None:
        """
        アクティブなメンバーを h だけ進める（h は負でもよい）。

        Raises:
            NumericalBlowupError: 非有限の状態が現れた場合
        """
        active = np.flatnonzero(self.active)
        if active.size:
            x = self._cur[active]
            if self.monitor_interval > 0 and (
                self._steps_taken % self.monitor_interval == 0
            ):
                self._monitor(x, h)
            new, nodes = self._rk4(x, h)
            moved = ~nodes
            if not np.all(np.isfinite(new[moved])):
                raise NumericalBlowupError(
                    f"non-finite state after {self._steps_taken + 1} steps"
                )
            self._status[active[nodes]] = TrajectoryStatus.HALTED_AT_NODE
            advanced = active[moved]
            self._cur[advanced] = new[moved]
            self._lengths[advanced] += 1
            if self._record and advanced.size:
                self._history.append((advanced, self._cur[advanced].copy()))
            if self.domain is not None:
                outside = ~self.domain.contains(self._cur[advanced])
                self._status[advanced[outside]] = TrajectoryStatus.HALTED_OUT_OF_DOMAIN
        self._steps_taken += 1

    def run(self, delta_s: float, step: float = STEP) -> FloatArray:
        """
        パラメータ幅 delta_s だけ流し、最終配置を返す。

        ステップ数は ceil(|Δs|/step)、実際の幅は Δs をその数で割った値。
        """
        n = step_count(delta_s, step)
        h = delta_s / n if n else 0.0
        self._h = h
        for _ in range(n):
            self.step(h)
            if not self.active.any():
                break
        counts = self.status_counts()
        logger.debug(
            "flowed %d members over delta_s=%g: %s",
            self._cur.shape[0],
            delta_s,
            {status.label: count for status, count in counts.items()},
        )
        return self._cur

    def trajectories(self, s0: float = 0.0) -> list[Trajectory]:
        """
        記録した軌道を返す（record=True のときのみ）。

        メンバー i の軌道は s0 から h 刻みで、止まるまでの状態を含む。
        """
        if not self._record:
            raise InvalidParameterError("trajectories were not recorded")
        count = self._start.shape[0]
        if count == 0:
            return []
        if self._history:
            members = np.concatenate([index for index, _ in self._history])
            states = np.concatenate([rows for _, rows in self._history])
        else:
            members = np.zeros(0, dtype=np.intp)
            states = self._start[:0]
        # 記録はステップ順なので、メンバー番号の安定ソートで軌道ごとにまとまる
        states = states[np.argsort(members, kind="stable")]
        per_member = np.split(states, np.cumsum(self._lengths - 1)[:-1])
        result = []
        for i, rows in enumerate(per_member):
            s_values = s0 + self._h * np.arange(self._lengths[i], dtype=np.float64)
            result.append(
                Trajectory(
                    s_values,
                    np.concatenate([self._start[i : i + 1], rows]),
                    TrajectoryStatus(int(self._status[i])),
                )
            )
        return result


def integrate_trajectory(
    packet: WavePacket,
    initial: Configuration,
    s_span: tuple[float, float],
    step: float = STEP,
    threshold: float | None = None,
    domain: SpacetimeBox | None = None,
) -> Trajectory:
    """
    1本の軌道を s_span にわたって積分し、全ステップを記録する。

    Parameters:
        packet (WavePacket): 波束
        initial (Configuration): 初期配置（ノードから離れていること）
        s_span (tuple[float, float]): (s0, s1)、s0 ≤ s1
        step (float): 最大ステップ幅（正）
        threshold (float | None): ノードしきい値（None なら 1e-9·Σ|c_k|）
        domain (SpacetimeBox | None): 出たら止める領域

    Returns:
        Trajectory: 記録した軌道

    Raises:
        NodeError: 初期配置がノード上にある場合
        NumericalBlowupError: 非有限の状態が現れた場合
    """
    s0, s1 = s_span
    if not s1 >= s0:
        raise InvalidParameterError(f"s_span must be ordered, got {s_span}")
    step_count(s1 - s0, step)
    velocity_field(packet, initial, threshold)
    flow = EnsembleFlow(
        packet, initial.to_array()[np.newaxis], threshold, domain, record=True
    )
    flow.run(s1 - s0, step)
    return flow.trajectories(s0)[0]


def _iter_batches[T](
    run_batch: Callable[[FloatArray], T], points: FloatArray, threads: int
) -> Iterator[T]:
    # FLOW_BATCH 個ずつに分け、結果は入力順に返す。同時に持つ結果は threads 個まで
    batches = [
        points[start : start + FLOW_BATCH]
        for start in range(0, points.shape[0], FLOW_BATCH)
    ]
    if threads <= 1 or len(batches) <= 1:
        for batch in batches:
            yield run_batch(batch)
        return
    with ThreadPoolExecutor(max_workers=threads) as executor:
        for start in range(0, len(batches), threads):
            yield from executor.map(run_batch, batches[start : start + threads])


def iter_trajectories(
    packet: WavePacket,
    initial: FloatArray,
    s_span: tuple[float, float],
    step: float = STEP,
    threshold: float | None = None,
    domain: SpacetimeBox | None = None,
    threads: int = 1,
) -> Iterator[Trajectory]:
    """
    多数の初期配置から軌道を積分し、入力順に1本ずつ返す。

    バッチ単位で積分するので、手元に持つ軌道は高々 threads バッチ分になる。
    バッチ分割はスレッド数に依存しないので、結果もスレッド数に依存しない。
    初期配置がノード上にある軌道は長さ1の halted-at-node になる。

    Raises:
        InvalidParameterError: s_span が逆順、またはステップ幅が不正な場合
    """
    s0, s1 = s_span
    if not s1 >= s0:
        raise InvalidParameterError(f"s_span must be ordered, got {s_span}")
    step_count(s1 - s0, step)

    def run_batch(batch: FloatArray) -> list[Trajectory]:
        flow = EnsembleFlow(packet, batch, threshold, domain, record=True)
        flow.run(s1 - s0, step)
        return flow.trajectories(s0)

    points = np.asarray(initial, dtype=np.float64)
    batches = _iter_batches(run_batch, points, threads)
    return (trajectory for batch in batches for trajectory in batch)


def integrate_ensemble(
    packet: WavePacket,
    initial: FloatArray,
    s_span: tuple[float, float],
    step: float = STEP,
    threshold: float | None = None,
    domain: SpacetimeBox | None = None,
    threads: int = 1,
) -> list[Trajectory]:
    """全ての軌道をリストで返す iter_trajectories。"""
    return list(
        iter_trajectories(packet, initial, s_span, step, threshold, domain, threads)
    )


def flow_map(
    packet: WavePacket,
    points: FloatArray,
    delta_s: float,
    step: float = STEP,
    threshold: float | None = None,
    threads: int = 1,
) -> tuple[FloatArray, npt.NDArray[np.int8]]:
    """
    フロー写像 Φ_Δs を配置の配列に適用する（Δs は負でもよい）。

    Returns:
        tuple[FloatArray, NDArray]: 最終配置 (N, n, 4) と TrajectoryStatus の値
    """
    step_count(delta_s, step)

    def run_batch(batch: FloatArray) -> tuple[FloatArray, npt.NDArray[np.int8]]:
        flow = EnsembleFlow(packet, batch, threshold)
        final = flow.run(delta_s, step)
        return final, flow.status

    arr = np.asarray(points, dtype=np.float64)
    if arr.shape[0] == 0:
        return arr.copy(), np.zeros(0, dtype=np.int8)
    results = list(_iter_batches(run_batch, arr, threads))
    return (
        np.concatenate([final for final, _ in results]),
        np.concatenate([status for _, status in results]),
    )
