"""
ガウス–ルジャンドル求積モジュール。

軸ごとのガウス–ルジャンドル則のテンソル積を提供する。

|ψ|² = Σ_{k,l} c_k c̄_l Π_j exp(-i(κ_{k,j} - κ_{l,j}) x_j) は軸ごとに分離するので、
テンソル積則を |ψ|² に適用した結果はモード対ごとの1次元和の積に厳密に一致する。
`SeparableQuadrature` はこの恒等式を使い、4n 次元の格子を作らずに同じ値を求める。
"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from pilotwave.defaults import MIN_GAUSS_POINTS, QUADRATURE_CHUNK
from pilotwave.errors import InvalidParameterError
from pilotwave.probability.box import Interval
from pilotwave.spacetime.four_vector import FloatArray
from pilotwave.wavepacket.packet import ComplexArray, WavePacket


def check_resolution(resolution: int) -> None:
    """軸あたりの点数が最小値以上か確認する。"""
    if resolution < MIN_GAUSS_POINTS:
        raise InvalidParameterError(
            f"quadrature needs at least {MIN_GAUSS_POINTS} points per axis, "
            f"got {resolution}"
        )


@dataclass(frozen=True)
class AxisRule:
    """
    1軸分の求積則。

    区間の軸はガウス–ルジャンドル点、固定された軸は重み1の1点になる。

    Attributes:
        nodes (FloatArray): 節点
        weights (FloatArray): 重み
    """

    nodes: FloatArray
    weights: FloatArray

    @classmethod
    def gauss_legendre(cls, interval: Interval, points: int) -> "AxisRule":
        """区間上の points 点ガウス–ルジャンドル則。"""
        x, w = np.polynomial.legendre.leggauss(points)
        half = 0.5 * interval.length
        return cls(
            np.asarray(interval.midpoint + half * x, dtype=np.float64),
            np.asarray(half * w, dtype=np.float64),
        )

    @classmethod
    def pinned(cls, value: float) -> "AxisRule":
        """座標を value に固定する（積分しない）軸。"""
        return cls(np.array([value], dtype=np.float64), np.ones(1, dtype=np.float64))

    def with_moment(self) -> "AxisRule":
        """重みに節点を掛けた則（∫ x f(x) dx 用）。"""
        return AxisRule(self.nodes, self.weights * self.nodes)

    @property
    def size(self) -> int:
        """節点数。"""
        return int(self.nodes.size)


class SeparableQuadrature:
    """
    波束の |ψ|² に対するテンソル積求積。

    軸 j ごとに M_j[k, l] = Σ_i w_i exp(-i(κ_{k,j} - κ_{l,j}) x_i) を作り、
    ∫|ψ|² ≈ Re Σ_{k,l} c_k c̄_l Π_j M_j[k, l] を返す。

    Attributes:
        packet (WavePacket): 対象の波束
        rules (tuple[AxisRule, ...]): 長さ 4n の軸ごとの則
    """

    def __init__(self, packet: WavePacket, rules: Sequence[AxisRule]) -> None:
        if len(rules) != 4 * packet.n_particles:
            raise InvalidParameterError(
                f"expected {4 * packet.n_particles} axis rules, got {len(rules)}"
            )
        self.packet = packet
        self.rules = tuple(rules)

    @property
    def evaluation_count(self) -> int:
        """同じ値を得るのに必要な格子点の数（テンソル積の大きさ）。"""
        count = 1
        for rule in self.rules:
            count *= rule.size
        return count

    def axis_matrix(self, j: int, rule: AxisRule) -> ComplexArray:
        """平坦軸 j についての (K, K) 行列 M_j。"""
        kappa = self.packet.covariant_momenta.reshape(self.packet.n_modes, -1)[:, j]
        u = np.exp(-1j * np.multiply.outer(kappa, rule.nodes))
        return np.asarray((u * rule.weights) @ u.conj().T, dtype=np.complex128)

    def pair_matrix(self, moment_axis: int | None = None) -> ComplexArray:
        """
        モード対の行列 Π_j M_j を返す。

        Parameters:
            moment_axis (int | None): 指定した平坦軸だけ重みに座標を掛ける

        Returns:
            ComplexArray: 形状 (K, K)
        """
        k = self.packet.n_modes
        product = np.ones((k, k), dtype=np.complex128)
        for j, rule in enumerate(self.rules):
            if j == moment_axis:
                rule = rule.with_moment()
            product *= self.axis_matrix(j, rule)
        return product

    def quadratic_form(self, pair: ComplexArray) -> complex:
        """Σ_{k,l} c_k P[k,l] c̄_l を返す。"""
        c = self.packet.amplitudes
        return complex(np.einsum("k,kl,l->", c, pair, c.conj()))

    def integral(self) -> float:
        """∫|ψ|² の近似値。"""
        return self.quadratic_form(self.pair_matrix()).real


def tensor_integrate(
    func: Callable[[FloatArray], FloatArray],
    intervals: Sequence[Interval],
    points: int,
    chunk: int = QUADRATURE_CHUNK,
) -> tuple[float, int]:
    """
    一般の被積分関数に対するテンソル積ガウス–ルジャンドル求積。

    格子は chunk 点ずつ生成して評価するので、メモリは次元に依存しない。
    和はチャンク順に固定した順序で取る。

    Parameters:
        func (Callable): 形状 (M, d) の点を受け取り (M,) の値を返す関数
        intervals (Sequence[Interval]): d 本の積分区間
        points (int): 軸あたりの点数
        chunk (int): 一度に評価する点数

    Returns:
        tuple[float, int]: (積分値, 評価点数)
    """
    if points < 1:
        raise InvalidParameterError(f"points per axis must be positive, got {points}")
    if not intervals:
        return float(func(np.zeros((1, 0), dtype=np.float64))[0]), 1
    rules = [AxisRule.gauss_legendre(interval, points) for interval in intervals]
    shape = tuple(rule.size for rule in rules)
    total_points = int(np.prod(shape))
    total = 0.0
    for start in range(0, total_points, chunk):
        flat_index = np.arange(start, min(start + chunk, total_points))
        indices = np.unravel_index(flat_index, shape)
        nodes = np.stack(
            [rule.nodes[idx] for rule, idx in zip(rules, indices, strict=True)], axis=-1
        )
        weights = np.ones(flat_index.size, dtype=np.float64)
        for rule, idx in zip(rules, indices, strict=True):
            weights *= rule.weights[idx]
        total += float(np.dot(weights, func(nodes)))
    return total, total_points
