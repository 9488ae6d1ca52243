import json

import pytest

from stpr import (
    FrustumRegion,
    GeometryError,
    HeatFieldRegion,
    ParseError,
    SchemaError,
    StartInForbiddenRegion,
    UnknownFixture,
    environment_to_json,
    load_environment,
    load_scenario,
    scenario_to_json,
)


def test_load_house(scenario_dir):
    env = load_environment(scenario_dir / "house.json")
    assert len(env.objects) == 15
    assert env.object_named("wall_south").box.max.z == 2.5


def test_load_scenario_fields(scenario_dir):
    s = load_scenario(scenario_dir / "s1_camera.json")
    assert s.name == "s1_camera"
    assert s.solvable is False
    assert isinstance(s.constraints[0].expr, FrustumRegion)
    assert s.rrt.step_size == 0.25
    assert s.goal_radius == 0.25


def test_fixture_reference_resolves(scenario_dir):
    s = load_scenario(scenario_dir / "s4_fireplace.json")
    expr = s.constraints[0].expr
    assert isinstance(expr, HeatFieldRegion)
    assert expr.h0 == 1000.0 and expr.alpha == 0.5


def test_bridge_descriptor_stays_unresolved(scenario_dir):
    s = load_scenario(scenario_dir / "s4_fireplace_bridge.json")
    c = s.constraints[0]
    assert c.expr is None and c.bridge is not None
    assert "fireplace" in c.bridge.instruction
    assert s.resolved_constraints() == ()


def test_missing_fixture_raises(scenario_dir, tmp_path):
    doc = json.loads((scenario_dir / "s4_fireplace.json").read_text())
    doc["constraints"][0]["fixture"] = "constraints/no_such_fixture.json"
    doc["environment"] = str(scenario_dir / "house.json")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    with pytest.raises(UnknownFixture):
        load_scenario(bad)


def test_start_in_forbidden_region_raises(scenario_dir, tmp_path):
    doc = json.loads((scenario_dir / "s2_hole.json").read_text())
    doc["start"] = [-1.0, -2.0, 0.0]  # inside the hole
    doc["environment"] = str(scenario_dir / "house.json")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    with pytest.raises(StartInForbiddenRegion):
        load_scenario(bad)


def test_out_of_bounds_goal_raises(scenario_dir, tmp_path):
    doc = json.loads((scenario_dir / "s2_hole.json").read_text())
    doc["goal"] = [99.0, 0.0, 0.0]
    doc["environment"] = str(scenario_dir / "house.json")
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    with pytest.raises(GeometryError):
        load_scenario(bad)


def test_schema_violation_raises(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"goal": [0, 0, 0]}))  # missing start
    with pytest.raises(SchemaError):
        load_scenario(bad)


def test_malformed_json_raises(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        load_scenario(bad)


def test_scenario_round_trip(scenario_dir):
    s = load_scenario(scenario_dir / "s3_kitchen.json")
    doc = scenario_to_json(s)
    again = load_scenario(doc)
    assert again.constraints == s.constraints
    assert again.start == s.start and again.goal == s.goal
    assert again.environment == s.environment
    assert again.rrt == s.rrt


def test_environment_round_trip(scenario_dir):
    env = load_environment(scenario_dir / "house.json")
    assert load_environment(environment_to_json(env)) == env
