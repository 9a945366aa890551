"""
例外定義モジュール。

ライブラリ全体で使用する例外階層と、CLIの終了コードを定義する。
ライブラリは例外を送出するだけで、終了コードへの変換はCLIが行う。
"""

from enum import IntEnum
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from pilotwave.spacetime.four_vector import Configuration


class ExitCode(IntEnum):
    """
    CLIの終了コードを表す列挙型。

    IntEnumを継承しているため、sys.exit() にそのまま渡せる。
    """

    OK = 0
    CHECK_FAILED = 1
    PARSE_ERROR = 2
    INVALID_AT_LOAD = 3
    DEGENERATE_RUN = 4
    INCONCLUSIVE = 5


class PilotWaveError(Exception):
    """
    全てのライブラリ例外の基底クラス。

    Attributes:
        exit_code (ExitCode): CLIがこの例外に対して返す終了コード
    """

    exit_code: ExitCode = ExitCode.INVALID_AT_LOAD


class DimensionError(PilotWaveError):
    """配置の粒子数や粒子インデックスがパケットと一致しない。"""


class InvalidParameterError(PilotWaveError, ValueError):
    """パラメータが許容範囲外（質量が非正、解像度不足など）。"""


class UnsupportedOperationError(PilotWaveError):
    """この入力に対しては定義されていない操作。"""


class DegeneratePacketError(PilotWaveError):
    """箱上の積分が消えるため正規化できない。"""


class DegenerateConditionError(PilotWaveError):
    """条件付き確率の正規化因子 N が非正。"""


class PathologicalEnvelopeError(PilotWaveError):
    """棄却サンプリングの受理率が低すぎる。"""


class NumericalBlowupError(PilotWaveError):
    """積分中に非有限の状態が現れた。"""


class NodeError(PilotWaveError):
    """
    波動関数のノード近傍で速度場を評価しようとした。

    Attributes:
        configuration (Configuration | None): 問題の配置
        modulus (float): その配置での |ψ|
    """

    def __init__(
        self,
        message: str,
        configuration: "Configuration | None" = None,
        modulus: float = 0.0,
    ) -> None:
        super().__init__(message)
        self.configuration = configuration
        self.modulus = modulus


class InconclusiveError(PilotWaveError):
    """検査を判定できるだけのサンプルや配置が得られない。"""

    exit_code = ExitCode.INCONCLUSIVE


class DegenerateRunError(PilotWaveError):
    """全ての初期配置がノード上にあり、軌道を1本も積分できない。"""

    exit_code = ExitCode.DEGENERATE_RUN


class PacketFormatError(PilotWaveError):
    """
    入力ファイル（パケット・箱・初期配置）の構文またはスキーマの誤り。

    Attributes:
        path (str): ファイルパス
        line (int | None): 行番号（構文エラーの場合）
        field (str | None): 問題のフィールド（例: ``modes[1].momenta[0]``）
    """

    exit_code = ExitCode.PARSE_ERROR

    def __init__(
        self,
        message: str,
        path: str = "<string>",
        line: int | None = None,
        field: str | None = None,
    ) -> None:
        location = path
        if line is not None:
            location += f":{line}"
        if field is not None:
            location += f" [{field}]"
        super().__init__(f"{location}: {message}")
        self.path = path
        self.line = line
        self.field = field
