"""
相対論的パイロット波エンジン。

多時間の波束、時空の確率密度、共変なボーム軌道、
有限時間カットオフでの遷移率を扱う。
"""

__version__ = "0.1.0"
