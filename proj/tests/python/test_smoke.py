"""Smoke tests for the python bindings."""

import json
import math
import os
from pathlib import Path

import pytest

import flightq


def scenario_dir():
    env = os.environ.get("FLIGHTQ_SCENARIOS")
    if env:
        return Path(env)
    return Path(__file__).resolve().parents[2] / "scenarios"


def test_circle_slots_match_analytic_placement():
    pattern = flightq.build_pattern(flightq.circle(1.0, 4))
    assert pattern.slot_count == 4
    expected = [(0, 0, 0), (1, -1, 0), (2, 0, 0), (1, 1, 0)]
    for slot, want in zip(pattern.slots, expected):
        assert all(abs(a - b) < 1e-9 for a, b in zip(slot, want))
    for leg in pattern.leg_lengths:
        assert leg == pytest.approx(math.sqrt(2.0))


def test_required_speed_and_clearance():
    pattern = flightq.build_pattern(flightq.circle(1.0, 4))
    assert flightq.required_speed(pattern, 1.0, 1) == pytest.approx(math.sqrt(2.0))
    assert flightq.min_slot_clearance(pattern) == pytest.approx(math.sqrt(2.0))
    with pytest.raises(RuntimeError):
        flightq.required_speed(pattern, 0.0, 1)


def test_composite_patterns():
    nest = flightq.nested2d([
        flightq.circle(0.5, 4),
        flightq.circle(1.0, 6),
    ])
    pattern = flightq.build_pattern(nest)
    assert pattern.slot_count == 10

    stack = flightq.stacked3d([
        flightq.ellipse(0.8, 0.6, 6),
        flightq.rectangle(1.2, 0.9, 8),
    ], layer_gap=0.5)
    assert flightq.build_pattern(stack).slot_count == 14


def test_validate_reports_problems():
    scenario_text = (scenario_dir() / "single_circle.json").read_text()
    assert flightq.validate_scenario(scenario_text) == []

    broken = json.loads(scenario_text)
    broken["dispatch"]["lambda_total"] = 1.5
    issues = flightq.validate_scenario(json.dumps(broken))
    assert any("RateMismatch" in issue for issue in issues)


def test_run_scenario_metrics_and_determinism(tmp_path):
    scenario = flightq.load_scenario(str(scenario_dir() / "single_circle.json"))
    trace_a = tmp_path / "a.jsonl"
    trace_b = tmp_path / "b.jsonl"
    metrics_a = flightq.run_scenario(scenario, trace_path=str(trace_a))
    metrics_b = flightq.run_scenario(scenario, trace_path=str(trace_b))

    assert metrics_a["spawned"] == 40
    assert metrics_a["admitted"] == 40
    assert metrics_a["failed"] == 0
    assert metrics_a["separation_violations"] == 0
    assert metrics_a["min_separation_m"] >= 0.1
    assert metrics_a["per_opening"][0]["admitted"] == 40
    assert trace_a.read_bytes() == trace_b.read_bytes()
    assert metrics_a == metrics_b

    shifted = flightq.run_scenario(scenario, seed=123)
    assert shifted["spawned"] == 40


def test_workload_generation_is_seeded():
    scenario = flightq.load_scenario(str(scenario_dir() / "rose_desk.json"))
    arrivals = flightq.generate_workload(scenario)
    assert len(arrivals) == 218
    times = [a[0] for a in arrivals]
    assert times[0] == pytest.approx(0.0)
    assert times[-1] == pytest.approx(295.12)
    assert flightq.generate_workload(scenario) == arrivals


def test_rose_desk_scale():
    rose = flightq.rose_desk_scale(1.0)
    assert rose["h"] == 218
    assert rose["interval_s"] == pytest.approx(1.36)
    assert rose["battery_s"] == pytest.approx(300.0)
    assert rose["opening_lambda"] == pytest.approx(1.0 / 1.36)
    with pytest.raises(RuntimeError):
        flightq.rose_desk_scale(0.0)
