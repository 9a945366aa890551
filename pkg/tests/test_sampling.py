"""
棄却サンプリングとカイ二乗検定のテスト。
"""

import numpy as np
import pytest

from pilotwave.errors import (
    InconclusiveError,
    InvalidParameterError,
    PathologicalEnvelopeError,
)
from pilotwave.probability import (
    SpacetimeBox,
    bin_probabilities,
    box_integral,
    chi_square_against_density,
    fit_bins_per_axis,
    sample_ensemble,
)
from pilotwave.wavepacket import PlaneWaveMode, WavePacket


def test_ensemble_shape_and_support(
    two_mode: WavePacket, box_1d: SpacetimeBox
) -> None:
    ensemble = sample_ensemble(two_mode, box_1d, 500, seed=7, batch_size=4096)
    assert ensemble.points.shape == (500, 1, 4)
    assert len(ensemble) == 500
    assert box_1d.contains(ensemble.points).all()
    assert np.all(ensemble.points[..., 2:] == 0.0)
    assert ensemble.proposals >= 500
    assert 0.0 < ensemble.acceptance_rate <= 1.0
    assert len(ensemble.to_configurations()) == 500


def test_same_seed_same_ensemble(two_mode: WavePacket, box_1d: SpacetimeBox) -> None:
    first = sample_ensemble(two_mode, box_1d, 300, seed=11, batch_size=1024)
    second = sample_ensemble(two_mode, box_1d, 300, seed=11, batch_size=1024)
    other = sample_ensemble(two_mode, box_1d, 300, seed=12, batch_size=1024)
    np.testing.assert_array_equal(first.points, second.points)
    assert not np.array_equal(first.points, other.points)


def test_threads_do_not_change_the_ensemble(
    entangled: WavePacket, box_two_particles: SpacetimeBox
) -> None:
    """バッチごとのストリームなのでスレッド数に依存しない。"""
    one = sample_ensemble(
        entangled, box_two_particles, 3000, 5, threads=1, batch_size=512
    )
    four = sample_ensemble(
        entangled, box_two_particles, 3000, 5, threads=4, batch_size=512
    )
    np.testing.assert_array_equal(one.points, four.points)
    assert one.proposals == four.proposals


def test_count_must_be_positive(plane_wave: WavePacket, box_1d: SpacetimeBox) -> None:
    with pytest.raises(InvalidParameterError):
        sample_ensemble(plane_wave, box_1d, 0, seed=0)


def test_zero_envelope(box_1d: SpacetimeBox) -> None:
    silent = WavePacket([1.0], [PlaneWaveMode.create(0.0, [[0.0]])])
    with pytest.raises(PathologicalEnvelopeError):
        sample_ensemble(silent, box_1d, 10, seed=0)


def test_pathological_envelope() -> None:
    """ほぼ打ち消し合う2モードでは受理率が極端に低い。"""
    packet = WavePacket(
        [1.0],
        [PlaneWaveMode.create(1.0, [[0.0]]), PlaneWaveMode.create(-1.0, [[1e-4]])],
    )
    tiny = SpacetimeBox.uniform_1d((0.0, 1e-3), (0.0, 1e-3))
    with pytest.raises(PathologicalEnvelopeError, match="acceptance rate"):
        sample_ensemble(packet, tiny, 10, seed=0, batch_size=1000, max_proposals=1000)


def test_bin_probabilities_sum_to_box_integral(
    two_mode: WavePacket, box_1d: SpacetimeBox
) -> None:
    masses, edges = bin_probabilities(two_mode, box_1d, 5, resolution=16)
    assert masses.shape == (5, 5)
    assert len(edges) == 2
    total = box_integral(two_mode, box_1d).value
    assert masses.sum() == pytest.approx(total, rel=1e-10)


def test_plane_wave_bins_are_uniform(
    plane_wave: WavePacket, box_1d: SpacetimeBox
) -> None:
    masses, _ = bin_probabilities(plane_wave, box_1d, 4)
    np.testing.assert_allclose(masses, 100.0 / 16)


def test_ensemble_follows_density(two_mode: WavePacket, box_1d: SpacetimeBox) -> None:
    ensemble = sample_ensemble(two_mode, box_1d, 5000, seed=3, batch_size=8192)
    result = chi_square_against_density(ensemble.points, two_mode, box_1d, 8)
    assert result.count == 5000
    assert result.bins_used > 1
    assert result.bins_per_axis == 8
    assert result.p_value > 0.01


def test_uniform_points_fail_against_a_structured_density(
    standing_wave: WavePacket, box_1d: SpacetimeBox
) -> None:
    """|ψ|² = 4cos²x に一様な点を当てると棄却される。"""
    rng = np.random.default_rng(0)
    points = np.zeros((5000, 1, 4))
    points[:, 0, 0] = rng.uniform(0.0, 10.0, 5000)
    points[:, 0, 1] = rng.uniform(-5.0, 5.0, 5000)
    result = chi_square_against_density(points, standing_wave, box_1d, 10)
    assert result.p_value < 1e-6


def test_chi_square_needs_points(two_mode: WavePacket, box_1d: SpacetimeBox) -> None:
    outside = np.full((3, 1, 4), 50.0)
    with pytest.raises(InvalidParameterError):
        chi_square_against_density(outside, two_mode, box_1d, 4)


def test_chi_square_needs_two_bins(two_mode: WavePacket, box_1d: SpacetimeBox) -> None:
    """2つ以上のビンに分けられないほど点が少ないと判定できない。"""
    points = np.zeros((3, 1, 4))
    points[:, 0, 0] = [1.0, 2.0, 3.0]
    with pytest.raises(InconclusiveError, match="too few points"):
        chi_square_against_density(points, two_mode, box_1d, 4)


@pytest.mark.parametrize(
    ("count", "dimensions", "n_modes", "expected"),
    [
        (5000, 2, 2, 15),
        (100_000, 2, 2, 20),
        (13_000, 4, 2, 5),
        (20_000, 8, 2, 2),
        (10**12, 8, 2, 5),
        (3, 2, 2, 1),
    ],
)
def test_fit_bins_per_axis(
    count: int, dimensions: int, n_modes: int, expected: int
) -> None:
    """平均度数と質量配列の大きさの両方で軸あたりのビン数を抑える。"""
    assert fit_bins_per_axis(20, count, dimensions, n_modes) == expected


def test_chi_square_in_four_active_axes(
    entangled: WavePacket, box_two_particles: SpacetimeBox
) -> None:
    """2粒子 1+1D でも点数に合わせてビンを粗くして検定できる。"""
    ensemble = sample_ensemble(entangled, box_two_particles, 3000, seed=2)
    result = chi_square_against_density(
        ensemble.points, entangled, box_two_particles, 20
    )
    assert result.bins_per_axis == 3
    assert result.bins_used > 1
    assert result.count == 3000
    assert 0.0 <= result.p_value <= 1.0


def test_final_batch_counts_only_the_proposals_drawn(
    plane_wave: WavePacket, box_1d: SpacetimeBox
) -> None:
    """|ψ|² が包絡に等しいと全て受理されるので、提案数は欲しい点数に一致する。"""
    ensemble = sample_ensemble(plane_wave, box_1d, 10, seed=0, batch_size=4096)
    assert len(ensemble) == 10
    assert ensemble.proposals == 10
    assert ensemble.acceptance_rate == 1.0
