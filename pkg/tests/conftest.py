"""
テスト共通のフィクスチャ。
"""

from collections.abc import Callable
from pathlib import Path

import pytest

from pilotwave.probability.box import SpacetimeBox
from pilotwave.wavepacket.mode import PlaneWaveMode
from pilotwave.wavepacket.packet import WavePacket

PLANE_WAVE_TOML = """\
particles = 1
masses = [1.0]

[[modes]]
amplitude_re = 1.0
amplitude_im = 0.0
momenta = [[0.5]]
"""

TWO_MODE_TOML = """\
particles = 1
masses = [1.0]

[[modes]]
amplitude_re = 1.0
amplitude_im = 0.0
momenta = [[0.0]]

[[modes]]
amplitude_re = 0.5
amplitude_im = 0.0
momenta = [[0.5]]
"""

BOX_1D_TOML = """\
[[particles]]
t_range = [0.0, 10.0]
x_range = [-5.0, 5.0]
"""


@pytest.fixture
def plane_wave() -> WavePacket:
    """質量1、運動量 0.5 の単一平面波。"""
    return WavePacket([1.0], [PlaneWaveMode.create(1.0, [[0.5]])])


@pytest.fixture
def two_mode() -> WavePacket:
    """ノードを持たない 1+1D の2モード波束（|ψ| ≥ 0.5）。"""
    return WavePacket(
        [1.0],
        [PlaneWaveMode.create(1.0, [[0.0]]), PlaneWaveMode.create(0.5, [[0.5]])],
    )


@pytest.fixture
def standing_wave() -> WavePacket:
    """cos(kx) 型の定在波。x = π/(2k) にノードを持つ。"""
    return WavePacket(
        [1.0],
        [PlaneWaveMode.create(1.0, [[1.0]]), PlaneWaveMode.create(1.0, [[-1.0]])],
    )


@pytest.fixture
def entangled() -> WavePacket:
    """
    振幅の異なる2つの積の重ね合わせ（エンタングルした2粒子、|ψ| ≥ 0.5）。

    振幅の絶対値が等しいと位相が2項の平均になり、速度が他の粒子に依存しない。
    """
    return WavePacket(
        [1.0, 1.0],
        [
            PlaneWaveMode.create(1.0, [[0.5], [-0.5]]),
            PlaneWaveMode.create(0.5j, [[-0.3], [0.3]]),
        ],
    )


@pytest.fixture
def product_state() -> WavePacket:
    """1モードの2粒子積状態。"""
    return WavePacket([1.0, 2.0], [PlaneWaveMode.create(1.0, [[0.3], [-0.2]])])


@pytest.fixture
def box_1d() -> SpacetimeBox:
    """t ∈ [0, 10], x ∈ [-5, 5] の 1+1D の箱。"""
    return SpacetimeBox.uniform_1d((0.0, 10.0), (-5.0, 5.0))


@pytest.fixture
def box_two_particles() -> SpacetimeBox:
    """2粒子の 1+1D の箱。"""
    return SpacetimeBox.uniform_1d((0.0, 4.0), (-3.0, 3.0), n=2)


@pytest.fixture
def write_file(tmp_path: Path) -> Callable[[str, str], Path]:
    """tmp_path にテキストファイルを書いてパスを返す。"""

    def write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return write


def off_shell(packet: WavePacket, energy: float = 2.0) -> WavePacket:
    """
    評価に使う共変運動量のエネルギー成分を質量殻から外した波束を返す。

    評価コードの誤りを模擬して、KG検査が失敗することを確かめるのに使う。
    """
    covariant = packet.covariant_momenta.copy()
    covariant[..., 0] = energy
    covariant.flags.writeable = False
    packet._covariant = covariant
    return packet
