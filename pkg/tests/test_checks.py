"""
不変量検査スイートとレジストリのテスト。
"""

from dataclasses import replace

import numpy as np
import pytest

from conftest import off_shell
from pilotwave.checks import (
    ALL_SUITES,
    CheckContext,
    CheckRegistry,
    CheckResult,
    KleinGordonCheck,
)
from pilotwave.checks.base import require_evaluated
from pilotwave.errors import InconclusiveError, NodeError
from pilotwave.probability import SpacetimeBox
from pilotwave.wavepacket import PlaneWaveMode, WavePacket


def quick_context(packet: WavePacket, box: SpacetimeBox) -> CheckContext:
    return CheckContext(
        packet,
        box,
        seed=1,
        step=0.01,
        s_span=(0.0, 1.0),
        samples=10,
        equivariance_count=2000,
    )


def by_name(results: list[CheckResult]) -> dict[str, CheckResult]:
    return {result.name: result for result in results}


def test_registry_is_a_singleton() -> None:
    assert CheckRegistry() is CheckRegistry()


def test_registry_names_in_order() -> None:
    assert CheckRegistry().names() == [
        "kg",
        "continuity",
        "equivariance",
        "covariance",
        "nonlocality",
    ]
    assert len(CheckRegistry().select(ALL_SUITES)) == 5
    assert isinstance(CheckRegistry().select("kg")[0], KleinGordonCheck)


def test_unknown_suite() -> None:
    with pytest.raises(ValueError, match="Unknown check suite"):
        CheckRegistry().get("gravity")


def test_sample_points_avoid_nodes(standing_wave: WavePacket) -> None:
    box = SpacetimeBox.uniform_1d((0.0, 1.0), (0.0, 3.0))
    context = quick_context(standing_wave, box)
    points = context.sample_points(0)
    assert points.shape == (10, 1, 4)
    assert np.all(np.abs(standing_wave.evaluate_many(points)) > 2e-3)
    np.testing.assert_array_equal(points, context.sample_points(0))


def test_sample_points_inconclusive(box_1d: SpacetimeBox) -> None:
    silent = WavePacket([1.0], [PlaneWaveMode.create(0.0, [[0.0]])])
    with pytest.raises(InconclusiveError):
        quick_context(silent, box_1d).sample_points(0)


def test_plane_wave_passes_local_suites(
    plane_wave: WavePacket, box_1d: SpacetimeBox
) -> None:
    context = quick_context(plane_wave, box_1d)
    registry = CheckRegistry()
    results = by_name(
        [
            result
            for name in ("kg", "continuity", "covariance", "nonlocality")
            for result in registry.get(name).run(context)
        ]
    )
    assert set(results) == {
        "kg.residual",
        "kg.order",
        "continuity.residual",
        "covariance.deviation",
        "nonlocality.probe",
    }
    assert all(result.passed for result in results.values())
    assert results["kg.order"].measured == pytest.approx(2.0, abs=0.2)
    assert results["nonlocality.probe"].detail.startswith("skipped")


def test_off_shell_packet_fails_kg(box_1d: SpacetimeBox) -> None:
    packet = off_shell(WavePacket([1.0], [PlaneWaveMode.create(1.0, [[0.5]])]))
    results = by_name(KleinGordonCheck().run(quick_context(packet, box_1d)))
    assert not results["kg.residual"].passed
    assert results["kg.residual"].measured > 0.1


def test_product_state_is_local(
    product_state: WavePacket, box_two_particles: SpacetimeBox
) -> None:
    context = quick_context(product_state, box_two_particles)
    [result] = CheckRegistry().get("nonlocality").run(context)
    assert result.passed
    assert result.tolerance is not None
    assert result.measured <= result.tolerance


def test_entangled_state_is_reported(
    entangled: WavePacket, box_two_particles: SpacetimeBox
) -> None:
    context = quick_context(entangled, box_two_particles)
    [result] = CheckRegistry().get("nonlocality").run(context)
    assert result.tolerance is None
    assert result.measured > 0.0
    assert "informational" in result.detail


def test_equivariance_suite(two_mode: WavePacket) -> None:
    box = SpacetimeBox.uniform_1d((0.0, 20.0), (0.0, 12.0))
    context = replace(quick_context(two_mode, box), equivariance_count=8000)
    results = by_name(CheckRegistry().get("equivariance").run(context))
    assert set(results) == {"equivariance.liouville", "equivariance.chi_square_p"}
    assert results["equivariance.liouville"].passed
    assert 0.0 <= results["equivariance.chi_square_p"].measured <= 1.0


def test_result_to_dict() -> None:
    result = CheckResult("kg.residual", 1e-7, 1e-5, True, "h=0.001")
    assert result.to_dict() == {
        "name": "kg.residual",
        "measured": 1e-7,
        "tolerance": 1e-5,
        "passed": True,
        "detail": "h=0.001",
    }


@pytest.mark.parametrize(
    ("suite", "target"),
    [("continuity", "continuity_residual"), ("nonlocality", "nonlocality_probe")],
)
def test_all_configurations_skipped_is_inconclusive(
    monkeypatch: pytest.MonkeyPatch,
    entangled: WavePacket,
    box_two_particles: SpacetimeBox,
    suite: str,
    target: str,
) -> None:
    """どの配置もノードで評価できなければ合格にせず判定不能とする。"""

    def always_at_node(*args: object, **kwargs: object) -> float:
        raise NodeError("stencil touches a node", modulus=0.0)

    monkeypatch.setattr(f"pilotwave.checks.suites.{target}", always_at_node)
    context = quick_context(entangled, box_two_particles)
    with pytest.raises(InconclusiveError, match="0 of 10 configurations"):
        CheckRegistry().get(suite).run(context)


def test_require_evaluated() -> None:
    require_evaluated("continuity", 5, 10)
    with pytest.raises(InconclusiveError):
        require_evaluated("continuity", 4, 10)
    with pytest.raises(InconclusiveError):
        require_evaluated("continuity", 0, 0)


def test_box_of_nodes_is_inconclusive(standing_wave: WavePacket) -> None:
    """ノードのすぐ近くしか含まない箱では配置が選べない。"""
    node = np.pi / 2.0
    box = SpacetimeBox.uniform_1d((0.0, 1.0), (node - 1e-9, node + 1e-9))
    with pytest.raises(InconclusiveError):
        CheckRegistry().get("continuity").run(quick_context(standing_wave, box))
