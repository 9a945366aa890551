"""
確率モジュール。

時空の確率密度、箱上の正規化、条件付き密度、アンサンブルのサンプリングを提供する。
"""

from pilotwave.probability.box import (
    Interval,
    ParticleBounds,
    SpacetimeBox,
    box_from_ranges,
    load_box,
    parse_box,
)
from pilotwave.probability.density import (
    DensityReport,
    IntegrationMethod,
    box_integral,
    conditional_density,
    conditional_integral,
    default_resolution,
    density,
    density_many,
    marginal_N,
    marginal_time_integral,
    momentum_expectation,
    normalize,
    position_expectation,
)
from pilotwave.probability.histogram import (
    ChiSquareResult,
    bin_probabilities,
    chi_square_against_density,
    fit_bins_per_axis,
    histogram_counts,
)
from pilotwave.probability.rng import StreamPurpose, stream
from pilotwave.probability.sampling import Ensemble, sample_ensemble

__all__ = [
    "ChiSquareResult",
    "DensityReport",
    "Ensemble",
    "IntegrationMethod",
    "Interval",
    "ParticleBounds",
    "SpacetimeBox",
    "StreamPurpose",
    "bin_probabilities",
    "box_from_ranges",
    "box_integral",
    "chi_square_against_density",
    "conditional_density",
    "conditional_integral",
    "default_resolution",
    "density",
    "density_many",
    "fit_bins_per_axis",
    "histogram_counts",
    "load_box",
    "marginal_N",
    "marginal_time_integral",
    "momentum_expectation",
    "normalize",
    "parse_box",
    "position_expectation",
    "sample_ensemble",
    "stream",
]
