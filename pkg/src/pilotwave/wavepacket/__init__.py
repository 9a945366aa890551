"""
波束モジュール。

正エネルギー平面波モードの有限和としての多時間波動関数を提供する。
"""

from pilotwave.spacetime.four_vector import Configuration
from pilotwave.wavepacket.loader import format_packet, load_packet, parse_packet
from pilotwave.wavepacket.mode import PlaneWaveMode, on_shell_energy
from pilotwave.wavepacket.nonrelativistic import (
    NonrelativisticPacket,
    nonrelativistic_reduce,
    schrodinger_packet,
)
from pilotwave.wavepacket.packet import ComplexArray, WavePacket
from pilotwave.wavepacket.residual import kg_residual_fd, kg_scale, kg_total_residual_fd

__all__ = [
    "ComplexArray",
    "Configuration",
    "NonrelativisticPacket",
    "PlaneWaveMode",
    "WavePacket",
    "format_packet",
    "kg_residual_fd",
    "kg_scale",
    "kg_total_residual_fd",
    "load_packet",
    "nonrelativistic_reduce",
    "on_shell_energy",
    "parse_packet",
    "schrodinger_packet",
]
