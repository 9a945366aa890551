"""
ボーム速度場と軌道積分のテスト。
"""

import math

import numpy as np
import pytest

from pilotwave.bohmian import (
    EnsembleFlow,
    Trajectory,
    TrajectoryStatus,
    continuity_residual,
    covariance_check,
    flow_map,
    integrate_ensemble,
    integrate_trajectory,
    iter_trajectories,
    nonlocality_probe,
    phase_gradient,
    step_count,
    velocity_field,
    velocity_many,
)
from pilotwave.errors import DimensionError, InvalidParameterError, NodeError
from pilotwave.probability import SpacetimeBox, sample_ensemble
from pilotwave.spacetime import Configuration, FourVector
from pilotwave.spacetime.four_vector import FloatArray
from pilotwave.wavepacket import (
    PlaneWaveMode,
    WavePacket,
    nonrelativistic_reduce,
    schrodinger_packet,
)

ENERGY = math.sqrt(1.25)  # 質量1、運動量0.5のエネルギー


def finite_difference_phase(
    packet: WavePacket, points: FloatArray, h: float = 1e-6
) -> FloatArray:
    """
    ψ(q + h e_{aμ}) / ψ(q - h e_{aμ}) の偏角から ∂_{aμ}S を中心差分で求める。

    比の偏角を取るので位相の巻き戻しは要らない。
    """
    gradient = np.empty_like(points)
    for a in range(packet.n_particles):
        for mu in range(4):
            plus = points.copy()
            minus = points.copy()
            plus[..., a, mu] += h
            minus[..., a, mu] -= h
            ratio = packet.evaluate_many(plus) / packet.evaluate_many(minus)
            gradient[..., a, mu] = np.angle(ratio) / (2.0 * h)
    return gradient


# ============
# 速度場
# ============


def test_plane_wave_velocity_is_momentum(plane_wave: WavePacket) -> None:
    """単一平面波では v^μ = p^μ。"""
    sample = velocity_field(plane_wave, Configuration.coincident(2.0, [[-1.0]]))
    np.testing.assert_allclose(
        sample.velocities[0].as_array(), [ENERGY, 0.5, 0.0, 0.0], atol=1e-14
    )
    assert sample.psi_modulus == pytest.approx(1.0)


def test_plane_wave_phase_gradient(plane_wave: WavePacket) -> None:
    """∂_μS = -p_μ（下付き）。"""
    gradient = phase_gradient(plane_wave, Configuration.coincident(0.5, [[0.5]]), 0)
    np.testing.assert_allclose(gradient.as_array(), [-ENERGY, 0.5, 0.0, 0.0])


def test_velocity_is_future_directed(two_mode: WavePacket) -> None:
    for t, x in [(0.0, 0.0), (1.3, -2.0), (4.0, 3.5)]:
        sample = velocity_field(two_mode, Configuration.coincident(t, [[x]]))
        assert sample.velocities[0].t > 0.0


def test_standing_wave_is_at_rest(standing_wave: WavePacket) -> None:
    """ψ = 2cos(x)e^{-iEt} の速度は (E, 0, 0, 0)。"""
    sample = velocity_field(standing_wave, Configuration.coincident(1.0, [[0.3]]))
    np.testing.assert_allclose(
        sample.velocities[0].as_array(), [math.sqrt(2.0), 0.0, 0.0, 0.0], atol=1e-12
    )


def test_node_raises_with_configuration(standing_wave: WavePacket) -> None:
    q = Configuration.coincident(0.0, [[math.pi / 2]])
    with pytest.raises(NodeError) as info:
        velocity_field(standing_wave, q)
    assert info.value.configuration == q
    assert info.value.modulus < 1e-9


def test_phase_gradient_checks_particle_index(entangled: WavePacket) -> None:
    q = Configuration.coincident(0.0, [[0.0], [0.0]])
    with pytest.raises(DimensionError):
        phase_gradient(entangled, q, 2)


@pytest.mark.parametrize("name", ["two_mode", "entangled"])
def test_phase_gradient_matches_finite_differences(
    name: str, request: pytest.FixtureRequest
) -> None:
    """1000点で解析的な ∂S と差分による ∂S が 1e-7 で一致する。"""
    packet: WavePacket = request.getfixturevalue(name)
    rng = np.random.default_rng(21)
    n = packet.n_particles
    points = np.zeros((1000, n, 4))
    points[..., 0] = rng.uniform(0.0, 10.0, (1000, n))
    points[..., 1:] = rng.uniform(-5.0, 5.0, (1000, n, 3))
    expected = finite_difference_phase(packet, points)
    analytic = np.array(
        [
            [
                phase_gradient(packet, Configuration.from_array(row), a).as_array()
                for a in range(n)
            ]
            for row in points
        ]
    )
    np.testing.assert_allclose(analytic, expected, rtol=0.0, atol=1e-7)
    velocity, _ = velocity_many(packet, points)
    np.testing.assert_allclose(velocity[..., 0], -expected[..., 0], atol=1e-7)
    np.testing.assert_allclose(velocity[..., 1:], expected[..., 1:], atol=1e-7)
    for row, expected_row in zip(points[:10], velocity[:10], strict=True):
        sample = velocity_field(packet, Configuration.from_array(row))
        np.testing.assert_allclose(
            [v.as_array() for v in sample.velocities], expected_row, atol=1e-12
        )


def test_nonrelativistic_limit_of_the_velocity() -> None:
    """|p|/m ≤ 1e-2 では v^x/v^t がシュレディンガーのボーム速度に一致する。"""
    packet = WavePacket(
        [1.0],
        [
            PlaneWaveMode.create(1.0, [[0.004]]),
            PlaneWaveMode.create(0.3, [[0.007]]),
            PlaneWaveMode.create(0.2j, [[0.01]]),
        ],
    )
    rng = np.random.default_rng(5)
    points = np.zeros((100, 1, 4))
    points[:, 0, 0] = rng.uniform(0.0, 50.0, 100)
    points[:, 0, 1] = rng.uniform(-100.0, 100.0, 100)
    velocity, _ = velocity_many(packet, points)
    relativistic = velocity[:, 0, 1] / velocity[:, 0, 0]
    for reduced in (nonrelativistic_reduce(packet), schrodinger_packet(packet)):
        expected = reduced.velocity_many(points[:, 0])[:, 0]
        scale = float(np.max(np.abs(expected)))
        np.testing.assert_allclose(relativistic, expected, rtol=1e-3, atol=1e-3 * scale)
        t, x = points[0, 0, 0], points[0, 0, 1]
        assert reduced.velocity([x], t)[0] == pytest.approx(
            relativistic[0], rel=1e-3, abs=1e-3 * scale
        )


# ============
# 軌道
# ============


def test_step_count() -> None:
    assert step_count(1.0, 0.3) == 4
    assert step_count(1.0, 0.25) == 4
    assert step_count(-1.0, 0.5) == 2
    assert step_count(0.0, 0.1) == 0
    with pytest.raises(InvalidParameterError):
        step_count(1.0, 0.0)


def test_plane_wave_trajectory_is_a_straight_line(plane_wave: WavePacket) -> None:
    """X(s) = X(0) + p s。"""
    start = Configuration.coincident(0.0, [[1.0]])
    trajectory = integrate_trajectory(plane_wave, start, (0.0, 10.0), step=0.01)
    assert trajectory.status is TrajectoryStatus.COMPLETED
    assert len(trajectory) == 1001
    assert trajectory.s_values[-1] == pytest.approx(10.0)
    expected = start.to_array() + 10.0 * np.array([ENERGY, 0.5, 0.0, 0.0])
    np.testing.assert_allclose(trajectory.final.to_array(), expected, atol=1e-9)


def test_rk4_error_shrinks_sixteenfold_per_halving() -> None:
    """刻みを半分にするごとに終点の誤差はほぼ 1/16 になる。"""
    packet = WavePacket(
        [1.0], [PlaneWaveMode.create(1.0, [[0.0]]), PlaneWaveMode.create(0.3, [[2.0]])]
    )
    start = Configuration.coincident(0.0, [[0.3]])

    def final(step: float) -> FloatArray:
        trajectory = integrate_trajectory(packet, start, (0.0, 4.0), step=step)
        assert trajectory.status is TrajectoryStatus.COMPLETED
        return trajectory.final.to_array()

    reference = final(0.0025)
    errors = [float(np.max(np.abs(final(h) - reference))) for h in (0.1, 0.05, 0.025)]
    assert 13.0 < errors[0] / errors[1] < 19.0
    assert 13.0 < errors[1] / errors[2] < 19.0


def test_empty_parameter_span(two_mode: WavePacket) -> None:
    start = Configuration.coincident(1.0, [[0.0]])
    trajectory = integrate_trajectory(two_mode, start, (2.0, 2.0))
    assert len(trajectory) == 1
    assert trajectory.s_values.tolist() == [2.0]
    assert trajectory.final == start


def test_unordered_span(two_mode: WavePacket) -> None:
    with pytest.raises(InvalidParameterError):
        integrate_trajectory(two_mode, Configuration.coincident(0.0, [[0.0]]), (1, 0))


def test_trajectory_cannot_start_at_a_node(standing_wave: WavePacket) -> None:
    with pytest.raises(NodeError):
        integrate_trajectory(
            standing_wave, Configuration.coincident(0.0, [[math.pi / 2]]), (0.0, 1.0)
        )


def test_trajectory_halts_outside_the_domain(
    plane_wave: WavePacket, box_1d: SpacetimeBox
) -> None:
    """t が10を超えたところで止まり、出た点を最後に記録する。"""
    start = Configuration.coincident(5.0, [[0.0]])
    trajectory = integrate_trajectory(
        plane_wave, start, (0.0, 10.0), step=0.01, domain=box_1d
    )
    assert trajectory.status is TrajectoryStatus.HALTED_OUT_OF_DOMAIN
    assert trajectory.final.points[0].t > 10.0
    assert not box_1d.contains(trajectory.states[-1:])[0]
    assert box_1d.contains(trajectory.states[:-1]).all()
    assert len(trajectory) < 1001


def test_trajectory_validates_parameters() -> None:
    with pytest.raises(InvalidParameterError):
        Trajectory(
            np.array([0.0, 0.0]), np.zeros((2, 1, 4)), TrajectoryStatus.COMPLETED
        )


def test_status_labels() -> None:
    assert TrajectoryStatus.HALTED_AT_NODE.label == "halted-at-node"
    assert TrajectoryStatus.COMPLETED.label == "completed"


def test_ensemble_marks_node_starts(standing_wave: WavePacket) -> None:
    initial = np.array(
        [[[0.0, math.pi / 2, 0.0, 0.0]], [[0.0, 0.2, 0.0, 0.0]]], dtype=np.float64
    )
    trajectories = integrate_ensemble(standing_wave, initial, (0.0, 1.0), step=0.1)
    assert trajectories[0].status is TrajectoryStatus.HALTED_AT_NODE
    assert len(trajectories[0]) == 1
    assert trajectories[1].status is TrajectoryStatus.COMPLETED
    assert len(trajectories[1]) == 11


def test_empty_ensemble(two_mode: WavePacket) -> None:
    empty = np.zeros((0, 1, 4))
    assert integrate_ensemble(two_mode, empty, (0.0, 1.0)) == []
    finals, status = flow_map(two_mode, empty, 1.0)
    assert finals.shape == (0, 1, 4)
    assert status.shape == (0,)


def test_flow_rejects_bad_shape(two_mode: WavePacket) -> None:
    with pytest.raises(InvalidParameterError):
        EnsembleFlow(two_mode, np.zeros((3, 2, 4)))


def test_flow_is_independent_of_threads(
    two_mode: WavePacket, box_1d: SpacetimeBox
) -> None:
    """FLOW_BATCH を超える数でも、スレッド数で結果は変わらない。"""
    points = sample_ensemble(two_mode, box_1d, 2500, seed=2, batch_size=8192).points
    one, status_one = flow_map(two_mode, points, 0.2, step=0.01, threads=1)
    three, status_three = flow_map(two_mode, points, 0.2, step=0.01, threads=3)
    np.testing.assert_array_equal(one, three)
    np.testing.assert_array_equal(status_one, status_three)


def test_flow_map_inverse(two_mode: WavePacket, box_1d: SpacetimeBox) -> None:
    """Φ_{-Δs} ∘ Φ_{Δs} は恒等写像。"""
    points = sample_ensemble(two_mode, box_1d, 20, seed=9).points
    forward, _ = flow_map(two_mode, points, 0.5, step=1e-3)
    back, status = flow_map(two_mode, forward, -0.5, step=1e-3)
    assert np.all(status == TrajectoryStatus.COMPLETED)
    np.testing.assert_allclose(back, points, atol=1e-8)


def test_status_counts(standing_wave: WavePacket) -> None:
    initial = np.array([[[0.0, math.pi / 2, 0.0, 0.0]], [[0.0, 0.0, 0.0, 0.0]]])
    flow = EnsembleFlow(standing_wave, initial)
    counts = flow.status_counts()
    assert counts[TrajectoryStatus.HALTED_AT_NODE] == 1
    assert counts[TrajectoryStatus.COMPLETED] == 1


def test_recording_skips_halted_members(
    plane_wave: WavePacket, box_1d: SpacetimeBox
) -> None:
    """領域を出たメンバーはそれ以降記録されない。"""
    initial = np.array([[[9.9, 0.0, 0.0, 0.0]], [[0.0, 0.0, 0.0, 0.0]]])
    flow = EnsembleFlow(plane_wave, initial, domain=box_1d, record=True)
    flow.run(1.0, step=0.01)
    first, second = flow.trajectories()
    assert first.status is TrajectoryStatus.HALTED_OUT_OF_DOMAIN
    assert len(first) == 10
    assert first.final.points[0].t > 10.0
    assert second.status is TrajectoryStatus.COMPLETED
    assert len(second) == 101
    np.testing.assert_allclose(
        second.states[-1, 0], [ENERGY, 0.5, 0.0, 0.0], atol=1e-12
    )
    assert flow.recorded_rows == len(first) + len(second)


def test_iter_trajectories_streams_in_input_order(
    two_mode: WavePacket, box_1d: SpacetimeBox
) -> None:
    """複数バッチ・複数スレッドでも入力順に、一括版と同じ軌道を返す。"""
    points = sample_ensemble(two_mode, box_1d, 2100, seed=6, batch_size=8192).points
    streamed = iter_trajectories(two_mode, points, (0.0, 0.05), step=0.01, threads=2)
    assert not isinstance(streamed, list)
    collected = list(streamed)
    listed = integrate_ensemble(two_mode, points, (0.0, 0.05), step=0.01)
    assert len(collected) == 2100
    for got, want in zip(collected, listed, strict=True):
        np.testing.assert_array_equal(got.states, want.states)
        assert got.status is want.status
    np.testing.assert_array_equal(collected[-1].states[0], points[-1])


def test_iter_trajectories_validates_before_iterating(two_mode: WavePacket) -> None:
    with pytest.raises(InvalidParameterError):
        iter_trajectories(two_mode, np.zeros((2, 1, 4)), (1.0, 0.0))


# ============
# 連続の式・共変性・非局所性
# ============


def test_continuity_residual(two_mode: WavePacket, entangled: WavePacket) -> None:
    q1 = Configuration.coincident(0.7, [[1.1]])
    assert continuity_residual(two_mode, q1, 1e-4) < 1e-6
    q2 = Configuration.of([FourVector(0.3, 0.1), FourVector(-0.2, 0.4)])
    assert continuity_residual(entangled, q2, 1e-4) < 1e-6


def test_continuity_residual_at_a_node(standing_wave: WavePacket) -> None:
    with pytest.raises(NodeError):
        continuity_residual(
            standing_wave, Configuration.coincident(0.0, [[math.pi / 2]]), 1e-4
        )


def test_continuity_residual_converges_at_second_order(
    two_mode: WavePacket, entangled: WavePacket
) -> None:
    """差分幅を半分にすると残差は 1/4 になる。"""
    cases = [
        (two_mode, Configuration.coincident(0.7, [[1.1]])),
        (two_mode, Configuration.coincident(2.0, [[-0.4]])),
        (two_mode, Configuration.coincident(5.5, [[3.0]])),
        (entangled, Configuration.of([FourVector(0.3, 0.1), FourVector(-0.2, 0.4)])),
    ]
    coarse = sum(continuity_residual(packet, q, 0.04) for packet, q in cases)
    fine = sum(continuity_residual(packet, q, 0.02) for packet, q in cases)
    assert 1.8 <= math.log2(coarse / fine) <= 2.2


def test_covariance(two_mode: WavePacket) -> None:
    start = Configuration.coincident(0.3, [[0.2]])
    deviation = covariance_check(two_mode, start, 0.5, (0.0, 2.0), step=1e-3)
    assert deviation < 1e-6


def test_product_state_is_local(product_state: WavePacket) -> None:
    q = Configuration.coincident(0.0, [[0.1], [-0.4]])
    shift = FourVector(0.0, 0.7)
    assert nonlocality_probe(product_state, q, 0, shift, 1) < 1e-12


def test_entangled_state_is_nonlocal(entangled: WavePacket) -> None:
    q = Configuration.coincident(0.0, [[0.0], [0.0]])
    shift = FourVector(0.0, 0.7)
    points = np.stack([q.to_array(), q.to_array()])
    points[1, 0, 1] += 0.7
    gradient = finite_difference_phase(entangled, points)
    # v と ∂S は成分の符号だけが違う
    expected = float(np.linalg.norm(gradient[1, 1] - gradient[0, 1]))
    measured = nonlocality_probe(entangled, q, 0, shift, 1)
    assert measured > 1e-3
    assert measured == pytest.approx(expected, abs=1e-7)
