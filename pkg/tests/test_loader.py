"""
波束・箱の定義ファイルの読み込みのテスト。
"""

from collections.abc import Callable
from pathlib import Path

import pytest

from conftest import BOX_1D_TOML, TWO_MODE_TOML
from pilotwave.errors import ExitCode, InvalidParameterError, PacketFormatError
from pilotwave.probability import load_box, parse_box
from pilotwave.wavepacket import format_packet, load_packet, parse_packet

WriteFile = Callable[[str, str], Path]


def test_load_two_mode_packet(write_file: WriteFile) -> None:
    packet = load_packet(write_file("packet.toml", TWO_MODE_TOML))
    assert packet.n_particles == 1
    assert packet.n_modes == 2
    assert packet.energies()[:, 0].tolist() == pytest.approx([1.0, 1.25**0.5])
    assert packet.amplitudes.tolist() == [1.0, 0.5]


def test_complex_amplitude_and_3d_momentum() -> None:
    data = {
        "particles": 1,
        "masses": [2.0],
        "modes": [{"amplitude_re": 0.5, "amplitude_im": -1.0, "momenta": [[1, 2, 2]]}],
    }
    packet = parse_packet(data)
    assert complex(packet.amplitudes[0]) == complex(0.5, -1.0)
    assert packet.energies()[0, 0] == pytest.approx((9.0 + 4.0) ** 0.5)


def test_missing_key_names_the_field() -> None:
    with pytest.raises(PacketFormatError, match="particles"):
        parse_packet({"masses": [1.0], "modes": []})


def test_wrong_type_names_the_field() -> None:
    data = {
        "particles": 1,
        "masses": [1.0],
        "modes": [{"amplitude_re": "one", "momenta": [[0.0]]}],
    }
    with pytest.raises(PacketFormatError) as info:
        parse_packet(data, "p.toml")
    assert info.value.field == "modes[0].amplitude_re"
    assert "p.toml" in str(info.value)


def test_momentum_count_must_match() -> None:
    data = {
        "particles": 2,
        "masses": [1.0, 1.0],
        "modes": [{"amplitude_re": 1.0, "momenta": [[0.0]]}],
    }
    with pytest.raises(PacketFormatError) as info:
        parse_packet(data)
    assert info.value.field == "modes[0].momenta"


def test_negative_mass_is_an_invariant_error() -> None:
    """構文は正しいが物理的に不正な値は InvalidParameterError（終了コード3）。"""
    data = {
        "particles": 1,
        "masses": [-1.0],
        "modes": [{"amplitude_re": 1.0, "momenta": [[0.0]]}],
    }
    with pytest.raises(InvalidParameterError, match=r"masses\[0\]") as info:
        parse_packet(data)
    assert info.value.exit_code is ExitCode.INVALID_AT_LOAD


def test_syntax_error_reports_line(write_file: WriteFile) -> None:
    path = write_file("bad.toml", "particles = 1\nmasses = = 2\n")
    with pytest.raises(PacketFormatError) as info:
        load_packet(path)
    assert info.value.line == 2
    assert info.value.exit_code is ExitCode.PARSE_ERROR


def test_missing_file(tmp_path: Path) -> None:
    with pytest.raises(PacketFormatError, match="cannot read file"):
        load_packet(tmp_path / "absent.toml")


def test_format_packet_reads_back(write_file: WriteFile) -> None:
    packet = load_packet(write_file("packet.toml", TWO_MODE_TOML))
    again = load_packet(write_file("again.toml", format_packet(packet)))
    assert again.masses == packet.masses
    assert again.modes == packet.modes


def test_load_box(write_file: WriteFile) -> None:
    box = load_box(write_file("box.toml", BOX_1D_TOML))
    assert box.n_particles == 1
    assert box.dimension == 2
    assert box.volume == 100.0
    assert box.is_one_plus_one


def test_box_needs_time_range() -> None:
    with pytest.raises(PacketFormatError) as info:
        parse_box({"particles": [{"x_range": [0.0, 1.0]}]})
    assert info.value.field == "particles[0].t_range"


def test_box_interval_must_have_length() -> None:
    with pytest.raises(InvalidParameterError):
        parse_box({"particles": [{"t_range": [1.0, 1.0]}]})


def test_box_interval_shape() -> None:
    with pytest.raises(PacketFormatError) as info:
        parse_box({"particles": [{"t_range": [0.0, 1.0], "y_range": [0.0]}]})
    assert info.value.field == "particles[0].y_range"
