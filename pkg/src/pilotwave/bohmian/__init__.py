"""
ボームモジュール。

共変なボーム速度場、パラメータ s による軌道の積分、
連続の式・等変性・共変性・非局所性の数値的な確認を提供する。
"""

from pilotwave.bohmian.diagnostics import (
    EquivarianceReport,
    characteristic_frequency,
    continuity_residual,
    covariance_check,
    equivariance_check,
    nonlocality_probe,
)
from pilotwave.bohmian.flow import (
    EnsembleFlow,
    Trajectory,
    TrajectoryStatus,
    flow_map,
    integrate_ensemble,
    integrate_trajectory,
    iter_trajectories,
    step_count,
)
from pilotwave.bohmian.velocity import (
    VelocitySample,
    node_threshold,
    phase_gradient,
    velocity_field,
    velocity_many,
)

__all__ = [
    "EnsembleFlow",
    "EquivarianceReport",
    "Trajectory",
    "TrajectoryStatus",
    "VelocitySample",
    "characteristic_frequency",
    "continuity_residual",
    "covariance_check",
    "equivariance_check",
    "flow_map",
    "integrate_ensemble",
    "integrate_trajectory",
    "iter_trajectories",
    "node_threshold",
    "nonlocality_probe",
    "phase_gradient",
    "step_count",
    "velocity_field",
    "velocity_many",
]
