"""
検査スイートのレジストリモジュール。
"""

from pilotwave.checks.base import InvariantCheck
from pilotwave.checks.suites import (
    ContinuityCheck,
    CovarianceCheck,
    EquivarianceCheck,
    KleinGordonCheck,
    NonlocalityCheck,
)

ALL_SUITES = "all"


class CheckRegistry:
    """
    検査スイートのレジストリ。

    スイート名から検査インスタンスを取得する。
    シングルトンパターンで実装。
    """

    _instance: "CheckRegistry | None" = None
    _checks: dict[str, InvariantCheck]

    def __new__(cls) -> "CheckRegistry":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._checks = {}
            cls._instance._initialize_checks()
        return cls._instance

    def _initialize_checks(self) -> None:
        """標準のスイートを登録順に登録する。"""
        self.register(KleinGordonCheck())
        self.register(ContinuityCheck())
        self.register(EquivarianceCheck())
        self.register(CovarianceCheck())
        self.register(NonlocalityCheck())

    def register(self, check: InvariantCheck) -> None:
        """
        スイートを登録する。

        Parameters:
            check (InvariantCheck): 登録する検査
        """
        self._checks[check.name] = check

    def get(self, name: str) -> InvariantCheck:
        """
        名前からスイートを取得する。

        Raises:
            ValueError: 未知のスイート名の場合
        """
        if name not in self._checks:
            raise ValueError(f"Unknown check suite: {name}")
        return self._checks[name]

    def names(self) -> list[str]:
        """登録されているスイート名（登録順）。"""
        return list(self._checks)

    def select(self, suite: str) -> list[InvariantCheck]:
        """`all` なら全スイート、それ以外は指定した1つ。"""
        if suite == ALL_SUITES:
            return list(self._checks.values())
        return [self.get(suite)]
