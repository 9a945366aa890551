"""
時空の箱モジュール。

正規化・求積・サンプリングの領域となる、粒子ごとの有界な4次元体積を定義する。
時間方向の幅が有限の時間カットオフ T を実現する。

空間範囲を省略した軸は「非活性」で、座標は0に固定され体積に寄与しない。
1+1D の箱は t_range と x_range だけを持つ。
"""

import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import numpy.typing as npt

from pilotwave.errors import DimensionError, InvalidParameterError, PacketFormatError
from pilotwave.spacetime.four_vector import Configuration, FloatArray
from pilotwave.wavepacket.loader import read_toml, require_list, require_real

BoolArray = npt.NDArray[np.bool_]

AXIS_NAMES = ("t", "x", "y", "z")


@dataclass(frozen=True, slots=True)
class Interval:
    """
    正の長さを持つ閉区間 [lo, hi]。

    Attributes:
        lo (float): 下端
        hi (float): 上端
    """

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise InvalidParameterError(f"interval bounds must be finite: {self}")
        if not self.hi > self.lo:
            raise InvalidParameterError(
                f"interval must have positive length: [{self.lo}, {self.hi}]"
            )

    @property
    def length(self) -> float:
        """区間の長さ。"""
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        """区間の中点。"""
        return 0.5 * (self.lo + self.hi)

    def shrunk(self, fraction: float) -> "Interval":
        """幅を fraction だけ縮めた同心の区間（両側から fraction/2 ずつ）。"""
        margin = 0.5 * fraction * self.length
        return Interval(self.lo + margin, self.hi - margin)


@dataclass(frozen=True, slots=True)
class ParticleBounds:
    """
    1粒子分の時空範囲。

    Attributes:
        t (Interval): 時間窓（必須）
        x (Interval | None): x 範囲（None なら非活性軸）
        y (Interval | None): y 範囲
        z (Interval | None): z 範囲
    """

    t: Interval
    x: Interval | None = None
    y: Interval | None = None
    z: Interval | None = None

    def axes(self) -> tuple[Interval | None, ...]:
        """(t, x, y, z) の順に区間を返す。"""
        return (self.t, self.x, self.y, self.z)


@dataclass(frozen=True)
class SpacetimeBox:
    """
    n粒子分の時空の箱。

    Attributes:
        particles (tuple[ParticleBounds, ...]): 粒子ごとの範囲
    """

    particles: tuple[ParticleBounds, ...]
    _axes: tuple[Interval | None, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.particles) == 0:
            raise InvalidParameterError("a box needs at least one particle")
        flat = tuple(axis for bounds in self.particles for axis in bounds.axes())
        object.__setattr__(self, "_axes", flat)

    @classmethod
    def uniform_1d(
        cls, t_range: tuple[float, float], x_range: tuple[float, float], n: int = 1
    ) -> "SpacetimeBox":
        """全粒子に同じ 1+1D の範囲を与えた箱を作る。"""
        bounds = ParticleBounds(Interval(*t_range), Interval(*x_range))
        return cls(tuple(bounds for _ in range(n)))

    @property
    def n_particles(self) -> int:
        """粒子数。"""
        return len(self.particles)

    @property
    def axes(self) -> tuple[Interval | None, ...]:
        """長さ 4n の平坦な軸リスト（粒子 a の軸 μ は 4a + μ 番目）。"""
        return self._axes

    def active_axes(self) -> Iterator[tuple[int, Interval]]:
        """活性軸の (平坦インデックス, 区間) を順に返す。"""
        for j, axis in enumerate(self._axes):
            if axis is not None:
                yield j, axis

    @property
    def active_mask(self) -> BoolArray:
        """活性軸なら True の (n, 4) 配列。"""
        mask = np.array([axis is not None for axis in self._axes], dtype=np.bool_)
        return mask.reshape(self.n_particles, 4)

    @property
    def dimension(self) -> int:
        """活性軸の数。"""
        return sum(1 for _ in self.active_axes())

    @property
    def volume(self) -> float:
        """活性軸の長さの積（4n 次元体積）。"""
        return math.prod(axis.length for _, axis in self.active_axes())

    @property
    def is_one_plus_one(self) -> bool:
        """どの粒子も活性な空間軸を高々1本しか持たないなら True。"""
        return all(
            sum(axis is not None for axis in bounds.axes()[1:]) <= 1
            for bounds in self.particles
        )

    def check_particles(self, n: int) -> None:
        """粒子数が一致するか確認する。"""
        if n != self.n_particles:
            raise DimensionError(
                f"box describes {self.n_particles} particles, packet has {n}"
            )

    def interior(self, shrink: float) -> "SpacetimeBox":
        """
        各活性軸の幅を shrink の割合だけ縮めた内部の箱を返す。

        Parameters:
            shrink (float): 0 以上 1 未満の縮小率

        Returns:
            SpacetimeBox: 内部の箱
        """
        if not 0.0 <= shrink < 1.0:
            raise InvalidParameterError(f"shrink must be in [0, 1), got {shrink}")
        particles = []
        for bounds in self.particles:
            spatial = [
                None if axis is None else axis.shrunk(shrink)
                for axis in bounds.axes()[1:]
            ]
            particles.append(ParticleBounds(bounds.t.shrunk(shrink), *spatial))
        return SpacetimeBox(tuple(particles))

    def contains(self, points: FloatArray) -> BoolArray:
        """
        各配置が全ての活性軸で箱の中にあるかを返す。

        Parameters:
            points (FloatArray): 形状 (..., n, 4)

        Returns:
            BoolArray: 形状 (...)
        """
        arr = np.asarray(points, dtype=np.float64)
        flat = arr.reshape(*arr.shape[:-2], 4 * self.n_particles)
        inside = np.ones(flat.shape[:-1], dtype=np.bool_)
        for j, axis in self.active_axes():
            inside &= (flat[..., j] >= axis.lo) & (flat[..., j] <= axis.hi)
        return inside

    def uniform(self, rng: np.random.Generator, count: int) -> FloatArray:
        """
        箱の中の一様分布から count 個の配置を引く。

        非活性軸の座標は0。

        Returns:
            FloatArray: 形状 (count, n, 4)
        """
        flat = np.zeros((count, 4 * self.n_particles), dtype=np.float64)
        for j, axis in self.active_axes():
            flat[:, j] = rng.uniform(axis.lo, axis.hi, size=count)
        return flat.reshape(count, self.n_particles, 4)

    def center(self) -> Configuration:
        """箱の中心の配置を返す。"""
        flat = np.array(
            [0.0 if axis is None else axis.midpoint for axis in self._axes],
            dtype=np.float64,
        )
        return Configuration.from_array(flat.reshape(self.n_particles, 4))


def _parse_interval(value: object, path: str, field_name: str) -> Interval:
    pair = require_list(value, path, field_name)
    if len(pair) != 2:
        raise PacketFormatError("expected [lo, hi]", path, field=field_name)
    lo = require_real(pair[0], path, f"{field_name}[0]")
    hi = require_real(pair[1], path, f"{field_name}[1]")
    return Interval(lo, hi)


def parse_box(data: dict[str, object], path: str = "<string>") -> SpacetimeBox:
    """
    読み込んだTOMLデータから箱を作る。

        [[particles]]
        t_range = [0.0, 10.0]
        x_range = [-5.0, 5.0]

    Raises:
        PacketFormatError: スキーマの誤り
        InvalidParameterError: 区間の長さが正でない場合
    """
    entries = require_list(data.get("particles"), path, "particles")
    if not entries:
        raise PacketFormatError(
            "at least one particle is required", path, field="particles"
        )
    particles: list[ParticleBounds] = []
    for a, entry in enumerate(entries):
        prefix = f"particles[{a}]"
        if not isinstance(entry, dict):
            raise PacketFormatError("expected a table", path, field=prefix)
        if "t_range" not in entry:
            raise PacketFormatError("missing key", path, field=f"{prefix}.t_range")
        t_axis = _parse_interval(entry["t_range"], path, f"{prefix}.t_range")
        spatial: list[Interval | None] = []
        for name in AXIS_NAMES[1:]:
            key = f"{name}_range"
            if key in entry:
                spatial.append(_parse_interval(entry[key], path, f"{prefix}.{key}"))
            else:
                spatial.append(None)
        particles.append(ParticleBounds(t_axis, *spatial))
    return SpacetimeBox(tuple(particles))


def load_box(path: str | Path) -> SpacetimeBox:
    """箱定義ファイルを読み込む。"""
    return parse_box(read_toml(path), str(path))


def box_from_ranges(
    ranges: Sequence[Sequence[tuple[float, float] | None]],
) -> SpacetimeBox:
    """
    粒子ごとの (t, x, y, z) 範囲の列から箱を作る。

    Parameters:
        ranges: 粒子ごとに長さ1〜4の範囲の列。先頭は時間窓、
            None や省略した軸は非活性になる。
    """
    particles = []
    for per_particle in ranges:
        if not per_particle or per_particle[0] is None:
            raise InvalidParameterError("every particle needs a time range")
        padded = list(per_particle[1:]) + [None] * (4 - len(per_particle))
        spatial = [None if r is None else Interval(*r) for r in padded]
        particles.append(ParticleBounds(Interval(*per_particle[0]), *spatial))
    return SpacetimeBox(tuple(particles))
