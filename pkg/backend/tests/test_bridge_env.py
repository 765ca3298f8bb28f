import sys
import textwrap

import pytest

from app.exceptions import BridgeProtocolError, ExecutionError
from app.services.environment.bridge_env import BridgeEnv
from app.services.environment.executor import execute_plan, probe_state

BRIDGE_SCRIPT = textwrap.dedent(
    """
    import json
    import sys

    room = "hallway"
    for line in sys.stdin:
        request = json.loads(line)
        op, action = request["op"], request.get("action")
        if op == "reset":
            room = "hallway"
            result = "You are in the " + room + "."
        elif op == "look":
            result = "You are in the " + room + "."
        elif op == "inventory":
            result = "nothing"
        elif op == "accessible_objects":
            result = ["agent", "kitchen"]
        elif op == "action_templates":
            result = ["go OBJ", "look around"]
        elif op == "describe":
            result = {"objective": "reach the kitchen", "prior_description": "two rooms"}
        elif op == "step" and action == "garble":
            print("this is not json", flush=True)
            continue
        elif op == "step" and action == "explode":
            print(json.dumps({"ok": False, "error": "simulator crashed"}), flush=True)
            continue
        elif op == "step" and action == "quit":
            sys.exit(0)
        elif op == "step" and action == "go kitchen":
            room = "kitchen"
            result = {"observation": "You enter the kitchen.", "raw_reward": 1.0, "done": True}
        elif op == "step":
            result = {"observation": "No known action matches that input.", "valid": False}
        else:
            result = None
        print(json.dumps({"ok": True, "result": result}), flush=True)
    """
)


@pytest.fixture
def bridge(tmp_path):
    script = tmp_path / "bridge.py"
    script.write_text(BRIDGE_SCRIPT, encoding="utf-8")
    env = BridgeEnv([sys.executable, str(script)], timeout=10.0)
    yield env
    env.close()


def test_bridge_reset_and_probe(bridge):
    assert bridge.reset() == "You are in the hallway."
    state_id, description, capacity = probe_state(bridge)
    assert capacity == 4
    assert "You are in the hallway." in description
    assert bridge.describe().objective == "reach the kitchen"


def test_bridge_step_through_executor(bridge):
    bridge.reset()
    result = execute_plan(bridge, ["dance", "go kitchen", "look around"])
    assert [record.valid for record in result.x_as] == [False, True]
    assert result.done
    assert result.x_as[1].raw_reward == 1.0


def test_malformed_response(bridge):
    bridge.reset()
    with pytest.raises(BridgeProtocolError):
        bridge.step("garble")


def test_error_response(bridge):
    bridge.reset()
    with pytest.raises(ExecutionError, match="simulator crashed"):
        bridge.step("explode")


def test_closed_bridge(bridge):
    bridge.reset()
    with pytest.raises(ExecutionError):
        bridge.step("quit")


def test_unstartable_bridge(tmp_path):
    env = BridgeEnv([str(tmp_path / "missing-binary")], timeout=1.0)
    with pytest.raises(ExecutionError):
        env.reset()


def test_non_text_result_rejected(bridge):
    with pytest.raises(BridgeProtocolError):
        bridge._text("accessible_objects")
