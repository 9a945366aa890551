"""
波束定義ファイルの読み込みモジュール。

TOML形式の人が書けるファイルから波束を作る。

    particles = 1
    masses = [1.0]

    [[modes]]
    amplitude_re = 1.0
    amplitude_im = 0.0
    momenta = [[0.5, 0.0, 0.0]]

エネルギーは保存せず、常に質量殻上で導出する。
構文エラーは行番号、スキーマエラーはフィールド名を報告する。
"""

import math
import re
import tomllib
from pathlib import Path
from typing import Any

from pilotwave.errors import PacketFormatError
from pilotwave.wavepacket.mode import PlaneWaveMode
from pilotwave.wavepacket.packet import WavePacket

_LINE_PATTERN = re.compile(r"line (\d+)")


def read_toml(path: str | Path) -> dict[str, Any]:
    """
    TOMLファイルを読み込む。

    Raises:
        PacketFormatError: ファイルが無い、または構文エラーの場合
    """
    source = Path(path)
    try:
        text = source.read_text(encoding="utf-8")
    except OSError as exc:
        raise PacketFormatError(f"cannot read file: {exc.strerror}", str(path)) from exc
    try:
        return tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        match = _LINE_PATTERN.search(str(exc))
        line = int(match.group(1)) if match else None
        raise PacketFormatError(str(exc), str(path), line=line) from exc


def require_real(value: object, path: str, field: str) -> float:
    """実数フィールドを検証して float で返す（bool は数値とみなさない）。"""
    if isinstance(value, bool) or not isinstance(value, int | float):
        raise PacketFormatError(f"expected a number, got {value!r}", path, field=field)
    result = float(value)
    if not math.isfinite(result):
        raise PacketFormatError(
            f"expected a finite number, got {value!r}", path, field=field
        )
    return result


def require_list(value: object, path: str, field: str) -> list[Any]:
    """リストフィールドを検証する。"""
    if not isinstance(value, list):
        raise PacketFormatError(f"expected a list, got {value!r}", path, field=field)
    return value


def parse_packet(data: dict[str, Any], path: str = "<string>") -> WavePacket:
    """
    読み込んだTOMLデータから波束を作る。

    スキーマの誤りは PacketFormatError、物理的な不変条件の違反
    （負の質量など）は WavePacket の生成時に InvalidParameterError になる。

    Parameters:
        data (dict[str, Any]): TOMLのトップレベルテーブル
        path (str): 診断に使うファイル名

    Returns:
        WavePacket: 生成した波束
    """
    if "particles" not in data:
        raise PacketFormatError("missing key", path, field="particles")
    particles = data["particles"]
    if isinstance(particles, bool) or not isinstance(particles, int) or particles < 1:
        raise PacketFormatError(
            f"expected a positive integer, got {particles!r}", path, field="particles"
        )

    masses_raw = require_list(data.get("masses"), path, "masses")
    if len(masses_raw) != particles:
        raise PacketFormatError(
            f"expected {particles} masses, got {len(masses_raw)}", path, field="masses"
        )
    masses = [require_real(m, path, f"masses[{a}]") for a, m in enumerate(masses_raw)]

    modes_raw = require_list(data.get("modes"), path, "modes")
    if not modes_raw:
        raise PacketFormatError("at least one mode is required", path, field="modes")

    modes: list[PlaneWaveMode] = []
    for k, entry in enumerate(modes_raw):
        prefix = f"modes[{k}]"
        if not isinstance(entry, dict):
            raise PacketFormatError("expected a table", path, field=prefix)
        re_part = require_real(
            entry.get("amplitude_re", 0.0), path, f"{prefix}.amplitude_re"
        )
        im_part = require_real(
            entry.get("amplitude_im", 0.0), path, f"{prefix}.amplitude_im"
        )
        momenta_raw = require_list(entry.get("momenta"), path, f"{prefix}.momenta")
        if len(momenta_raw) != particles:
            raise PacketFormatError(
                f"expected {particles} momenta, got {len(momenta_raw)}",
                path,
                field=f"{prefix}.momenta",
            )
        momenta: list[list[float]] = []
        for a, p in enumerate(momenta_raw):
            field = f"{prefix}.momenta[{a}]"
            vector = require_list(p, path, field)
            if not 1 <= len(vector) <= 3:
                raise PacketFormatError("expected 1 to 3 components", path, field=field)
            momenta.append(
                [require_real(c, path, f"{field}[{i}]") for i, c in enumerate(vector)]
            )
        modes.append(PlaneWaveMode.create(complex(re_part, im_part), momenta))

    return WavePacket(masses, modes)


def load_packet(path: str | Path) -> WavePacket:
    """波束定義ファイルを読み込んで波束を返す。"""
    return parse_packet(read_toml(path), str(path))


def format_packet(packet: WavePacket) -> str:
    """波束を読み戻せるTOML文字列に書き出す。"""
    lines = [
        f"particles = {packet.n_particles}",
        "masses = [" + ", ".join(repr(m) for m in packet.masses) + "]",
    ]
    for mode in packet.modes:
        momenta = ", ".join(
            "[" + ", ".join(repr(c) for c in p) + "]" for p in mode.momenta
        )
        lines += [
            "",
            "[[modes]]",
            f"amplitude_re = {mode.amplitude.real!r}",
            f"amplitude_im = {mode.amplitude.imag!r}",
            f"momenta = [{momenta}]",
        ]
    return "\n".join(lines) + "\n"
