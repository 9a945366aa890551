"""
遷移率モジュール。

有限時間カットオフでの遷移振幅と、|A|²/T が物理的な遷移率であることの数値的な確認。
"""

from pilotwave.transition.rate import (
    RateProfile,
    amplitude_many,
    finite_time_amplitude,
    rate,
    rate_integral,
    rate_many,
    rate_profile,
)

__all__ = [
    "RateProfile",
    "amplitude_many",
    "finite_time_amplitude",
    "rate",
    "rate_integral",
    "rate_many",
    "rate_profile",
]
