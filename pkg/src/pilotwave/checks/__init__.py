"""
不変量検査モジュール。

`check` サブコマンドで実行する検査スイートとそのレジストリを提供する。
"""

from pilotwave.checks.base import CheckContext, CheckResult, InvariantCheck
from pilotwave.checks.registry import ALL_SUITES, CheckRegistry
from pilotwave.checks.suites import (
    ContinuityCheck,
    CovarianceCheck,
    EquivarianceCheck,
    KleinGordonCheck,
    NonlocalityCheck,
)

__all__ = [
    "ALL_SUITES",
    "CheckContext",
    "CheckRegistry",
    "CheckResult",
    "ContinuityCheck",
    "CovarianceCheck",
    "EquivarianceCheck",
    "InvariantCheck",
    "KleinGordonCheck",
    "NonlocalityCheck",
]
