"""
probability モジュール（箱・密度・求積）のテスト。
"""

import cmath
import math

import numpy as np
import pytest

from pilotwave.errors import (
    DegenerateConditionError,
    DegeneratePacketError,
    DimensionError,
    InvalidParameterError,
)
from pilotwave.probability import (
    DensityReport,
    IntegrationMethod,
    SpacetimeBox,
    box_from_ranges,
    box_integral,
    conditional_density,
    conditional_integral,
    default_resolution,
    density,
    marginal_N,
    marginal_time_integral,
    momentum_expectation,
    normalize,
    position_expectation,
    stream,
)
from pilotwave.probability.box import Interval
from pilotwave.probability.quadrature import tensor_integrate
from pilotwave.spacetime import Configuration
from pilotwave.wavepacket import PlaneWaveMode, WavePacket


def exp_integral(omega: float, lo: float, hi: float) -> complex:
    """∫_lo^hi e^{-iωs} ds の閉じた形。"""
    if omega == 0.0:
        return complex(hi - lo)
    return (cmath.exp(-1j * omega * hi) - cmath.exp(-1j * omega * lo)) / (-1j * omega)


def closed_form_integral(packet: WavePacket, t: Interval, x: Interval) -> float:
    """1粒子 1+1D の ∫|ψ|² をモード対ごとの閉じた形で計算する。"""
    total = 0j
    energies = packet.energies()[:, 0]
    momenta = packet.momenta[:, 0, 1]
    for k, c_k in enumerate(packet.amplitudes):
        for j, c_j in enumerate(packet.amplitudes):
            d_e = energies[k] - energies[j]
            d_p = momenta[k] - momenta[j]
            total += (
                c_k
                * c_j.conjugate()
                * exp_integral(d_e, t.lo, t.hi)
                * exp_integral(-d_p, x.lo, x.hi)
            )
    return total.real


# ============
# 箱
# ============


def test_box_geometry(box_1d: SpacetimeBox) -> None:
    assert box_1d.volume == 100.0
    assert box_1d.dimension == 2
    assert default_resolution(box_1d) == 64
    assert box_1d.center().to_array().tolist() == [[5.0, 0.0, 0.0, 0.0]]
    inner = box_1d.interior(0.1)
    assert inner.particles[0].t == Interval(0.5, 9.5)
    assert inner.particles[0].x == Interval(-4.5, 4.5)


def test_three_dimensional_box_resolution() -> None:
    box = box_from_ranges([[(0.0, 1.0), (0.0, 1.0), (0.0, 1.0), (0.0, 1.0)]])
    assert not box.is_one_plus_one
    assert default_resolution(box) == 16
    assert box.dimension == 4


def test_uniform_samples_stay_inside(box_two_particles: SpacetimeBox) -> None:
    points = box_two_particles.uniform(stream(3, 0), 500)
    assert points.shape == (500, 2, 4)
    assert box_two_particles.contains(points).all()
    # 非活性軸は0に固定
    assert np.all(points[..., 2:] == 0.0)


def test_contains(box_1d: SpacetimeBox) -> None:
    points = np.array([[[5.0, 0.0, 0.0, 0.0]], [[11.0, 0.0, 0.0, 0.0]]])
    assert box_1d.contains(points).tolist() == [True, False]


def test_interior_shrink_range(box_1d: SpacetimeBox) -> None:
    with pytest.raises(InvalidParameterError):
        box_1d.interior(1.0)


def test_rng_streams_are_reproducible() -> None:
    a = stream(5, 2).uniform(size=4)
    b = stream(5, 2).uniform(size=4)
    c = stream(5, 3).uniform(size=4)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


# ============
# 密度と積分
# ============


def test_density_of_plane_wave_is_one(plane_wave: WavePacket) -> None:
    q = Configuration.coincident(3.0, [[1.0]])
    assert density(plane_wave, q) == pytest.approx(1.0)


def test_plane_wave_box_integral_is_volume(
    plane_wave: WavePacket, box_1d: SpacetimeBox
) -> None:
    report = box_integral(plane_wave, box_1d)
    assert report.value == pytest.approx(100.0, rel=1e-12)
    assert report.estimated_error < 1e-9
    assert report.evaluation_count == 64 * 64


def test_two_mode_box_integral_matches_closed_form(
    two_mode: WavePacket, box_1d: SpacetimeBox
) -> None:
    expected = closed_form_integral(two_mode, Interval(0.0, 10.0), Interval(-5.0, 5.0))
    report = box_integral(two_mode, box_1d)
    assert report.value == pytest.approx(expected, rel=1e-10)


def test_separable_matches_generic_tensor_grid(
    entangled: WavePacket, box_two_particles: SpacetimeBox
) -> None:
    """分離型の求積は4n次元の格子で直接足した値と一致する。"""
    intervals = [axis for _, axis in box_two_particles.active_axes()]
    columns = [j for j, _ in box_two_particles.active_axes()]

    def integrand(nodes: np.ndarray) -> np.ndarray:
        flat = np.zeros((nodes.shape[0], 8))
        flat[:, columns] = nodes
        values = entangled.evaluate_many(flat.reshape(-1, 2, 4))
        return np.abs(values) ** 2

    direct, _ = tensor_integrate(integrand, intervals, 12)
    report = box_integral(entangled, box_two_particles, resolution=12)
    assert report.value == pytest.approx(direct, rel=1e-10)


def test_monte_carlo_agrees_with_quadrature(
    two_mode: WavePacket, box_1d: SpacetimeBox
) -> None:
    exact = box_integral(two_mode, box_1d).value
    report = box_integral(
        two_mode, box_1d, IntegrationMethod.MONTE_CARLO, resolution=200_000, seed=1
    )
    assert abs(report.value - exact) < 5.0 * report.estimated_error
    assert report.evaluation_count == 200_000


def test_monte_carlo_independent_of_threads(
    two_mode: WavePacket, box_1d: SpacetimeBox
) -> None:
    one = box_integral(two_mode, box_1d, "monte-carlo", 150_000, seed=4, threads=1)
    many = box_integral(two_mode, box_1d, "monte-carlo", 150_000, seed=4, threads=3)
    assert one == many


def test_resolution_limits(two_mode: WavePacket, box_1d: SpacetimeBox) -> None:
    with pytest.raises(InvalidParameterError):
        box_integral(two_mode, box_1d, resolution=1)
    with pytest.raises(InvalidParameterError):
        box_integral(two_mode, box_1d, IntegrationMethod.MONTE_CARLO, resolution=5)


def test_box_particle_count_must_match(
    entangled: WavePacket, box_1d: SpacetimeBox
) -> None:
    with pytest.raises(DimensionError):
        box_integral(entangled, box_1d)


def test_density_report_is_nonnegative() -> None:
    with pytest.raises(InvalidParameterError):
        DensityReport(-1.0, 0.0, 1)


def test_normalize(two_mode: WavePacket, box_1d: SpacetimeBox) -> None:
    normalized = normalize(two_mode, box_1d)
    assert box_integral(normalized, box_1d).value == pytest.approx(1.0, rel=1e-10)


def test_normalize_vanishing_packet(box_1d: SpacetimeBox) -> None:
    silent = WavePacket([1.0], [PlaneWaveMode.create(0.0, [[0.5]])])
    with pytest.raises(DegeneratePacketError):
        normalize(silent, box_1d)


# ============
# 条件付き密度と周辺分布
# ============


def test_marginal_n_of_plane_wave(
    plane_wave: WavePacket, box_1d: SpacetimeBox
) -> None:
    """N は空間範囲の長さ（時間範囲は使わない）。"""
    report = marginal_N(plane_wave, [123.0], box_1d)
    assert report.value == pytest.approx(10.0, rel=1e-12)
    q = [[0.3]]
    assert conditional_density(plane_wave, [123.0], q, report) == pytest.approx(0.1)


def test_conditional_integral_is_one(
    entangled: WavePacket, box_two_particles: SpacetimeBox
) -> None:
    report = conditional_integral(entangled, [0.5, 1.5], box_two_particles, 24)
    assert report.value == pytest.approx(1.0, rel=1e-9)


def test_conditional_density_needs_positive_n(plane_wave: WavePacket) -> None:
    with pytest.raises(DegenerateConditionError):
        conditional_density(plane_wave, [0.0], [[0.0]], 0.0)


def test_conditional_density_dimension(plane_wave: WavePacket) -> None:
    with pytest.raises(DimensionError):
        conditional_density(plane_wave, [0.0, 1.0], [[0.0]], 1.0)


def test_marginal_time_integral_of_normalized_packet(
    two_mode: WavePacket, box_1d: SpacetimeBox
) -> None:
    """正規化した波束では ∫N_t dt = 1。"""
    normalized = normalize(two_mode, box_1d, resolution=32)
    report = marginal_time_integral(normalized, box_1d, resolution=32)
    assert report.value == pytest.approx(1.0, rel=1e-8)


# ============
# 期待値
# ============


def test_position_expectation_of_plane_wave(
    plane_wave: WavePacket, box_1d: SpacetimeBox
) -> None:
    """一様な密度では期待値は箱の中心。"""
    expected = position_expectation(plane_wave, box_1d)
    np.testing.assert_allclose(expected, [[5.0, 0.0, 0.0, 0.0]], atol=1e-10)


def test_momentum_expectation_of_plane_wave(
    plane_wave: WavePacket, box_1d: SpacetimeBox
) -> None:
    """単一平面波では ⟨p^μ⟩ = p^μ。"""
    expected = momentum_expectation(plane_wave, box_1d)
    np.testing.assert_allclose(
        expected, [[math.sqrt(1.25), 0.5, 0.0, 0.0]], atol=1e-12
    )
