"""Wire protocol tests against a live server subprocess."""

import json


def test_generate_eval_bbox_round_trip(bridge_proc, house_env):
    resp = bridge_proc.request(
        {
            "op": "generate",
            "instruction": "Stay away from the hole in the floor.",
            "env": house_env,
            "params": {"margin": 0.2},
        }
    )
    handle = resp["handle"]
    assert handle.startswith("is_in_constraints_hole")
    assert resp["bbox"] == {"min": [-2.1, -3.0, -0.2], "max": [-0.1, -1.0, 0.7]}
    assert resp["provenance"]["mode"] == "fixture"

    points = [[-1.0, -2.0, 0.1], [3.0, 3.0, 0.0], [-1.0, -2.0, 5.0]]
    ev = bridge_proc.request({"op": "eval", "handle": handle, "points": points})
    assert ev["results"] == [True, False, False]

    bb = bridge_proc.request({"op": "bbox", "handle": handle})
    assert bb["bbox"] == resp["bbox"]

    assert bridge_proc.shutdown() == 0


def test_handles_are_distinct_per_generate(bridge_proc):
    h1 = bridge_proc.request({"op": "generate", "instruction": "avoid the hole"})["handle"]
    h2 = bridge_proc.request({"op": "generate", "instruction": "avoid the hole"})["handle"]
    assert h1 != h2


def test_unknown_handle_error(bridge_proc):
    resp = bridge_proc.request({"op": "eval", "handle": "nope#9", "points": [[0, 0, 0]]})
    assert resp["error"]["code"] == "unknown_handle"


def test_unknown_fixture_error(bridge_proc):
    resp = bridge_proc.request({"op": "generate", "instruction": "tap dance loudly"})
    assert resp["error"]["code"] == "unknown_fixture"


def test_unknown_op_error(bridge_proc):
    resp = bridge_proc.request({"op": "levitate"})
    assert "error" in resp


def test_malformed_json_keeps_session_alive(bridge_proc):
    resp = bridge_proc.send_line("{not json")
    assert resp["error"]["code"] == "malformed_request"
    resp = bridge_proc.send_line(json.dumps([1, 2, 3]))
    assert resp["error"]["code"] == "malformed_request"
    # the session must still answer well-formed requests
    ok = bridge_proc.request({"op": "generate", "instruction": "avoid the camera"})
    assert ok["handle"].startswith("is_in_constraints_camera")


def test_eval_exception_is_an_error_not_a_crash(bridge_proc):
    handle = bridge_proc.request(
        {"op": "generate", "instruction": "keep away from the fireplace"}
    )["handle"]
    # the heat model is singular exactly at the source point
    resp = bridge_proc.request(
        {"op": "eval", "handle": handle, "points": [[0.5, 1.1, 0.0]]}
    )
    assert "error" in resp
    ok = bridge_proc.request(
        {"op": "eval", "handle": handle, "points": [[0.5, 1.1, 0.3]]}
    )
    assert ok["results"] == [True]


def test_shutdown_exits_cleanly(bridge_proc):
    assert bridge_proc.shutdown() == 0
