import math

import pytest

from app.exceptions import ExecutionError
from app.schemas.graph import INVALID_ID, ROOT_ID
from app.services.environment.executor import (
    START_ACTION,
    execute_plan,
    probe_state,
    signed_log1p,
    start_record,
    state_text,
)
from app.services.environment.toy_world import CANONICAL_SOLUTION, KeyDoorWorld
from app.services.graph.state_graph import encode_state


class FailingWorld(KeyDoorWorld):
    """Raises from step() once `fail_after` steps have succeeded"""

    def __init__(self, fail_after: int):
        super().__init__()
        self.fail_after = fail_after
        self.steps = 0

    def step(self, action):
        if self.steps >= self.fail_after:
            raise RuntimeError("connection to the environment lost")
        self.steps += 1
        return super().step(action)


def test_signed_log1p():
    assert signed_log1p(0.0) == 0.0
    assert signed_log1p(1.0) == pytest.approx(math.log(2.0))
    assert signed_log1p(-1.0) == pytest.approx(-math.log(2.0))
    samples = [-10.0, -1.0, -0.25, 0.0, 0.25, 1.0, 10.0]
    transformed = [signed_log1p(value) for value in samples]
    assert transformed == sorted(transformed)
    assert all(math.copysign(1, t) == math.copysign(1, s) for s, t in zip(samples, transformed) if s)


def test_empty_plan(env):
    env.reset()
    result = execute_plan(env, [])
    assert result.x_ao == []
    assert result.x_as == []
    assert not result.done


def test_single_step_reward(env):
    env.reset()
    start_id = probe_state(env)[0]
    result = execute_plan(env, ["go kitchen"])

    assert len(result.x_ao) == 1
    assert result.x_ao[0].observation.startswith("This room is called the kitchen.")
    step = result.x_as[0]
    assert step.raw_reward == 0.25
    assert step.transformed_reward == signed_log1p(0.25)
    assert step.source_id == start_id
    assert step.state_id == encode_state(env.look(), env.inventory())
    assert step.action_capacity == 6 * 3


def test_invalid_action_keeps_state(env):
    env.reset()
    start_id = probe_state(env)[0]
    result = execute_plan(env, ["eat door", "go kitchen"], source=start_id)

    invalid, valid = result.x_as
    assert not invalid.valid
    assert invalid.state_id == INVALID_ID
    assert invalid.source_id == start_id
    assert valid.source_id == start_id
    assert valid.valid


def test_stops_when_done(env):
    env.reset()
    result = execute_plan(env, CANONICAL_SOLUTION + ["go kitchen", "look around"])
    assert result.done
    assert result.interactions == len(CANONICAL_SOLUTION)
    assert result.raw_reward == 1.0


def test_replay_is_identical(env):
    env.reset()
    first = execute_plan(env, CANONICAL_SOLUTION[:4] + ["eat picture"])
    env.reset()
    second = execute_plan(env, CANONICAL_SOLUTION[:4] + ["eat picture"])
    assert first == second
    assert len(first.x_ao) == len(first.x_as) == 5


def test_adapter_failure_carries_partial_traces():
    world = FailingWorld(fail_after=2)
    world.reset()
    with pytest.raises(ExecutionError) as excinfo:
        execute_plan(world, CANONICAL_SOLUTION)
    assert [record.action for record in excinfo.value.x_as] == CANONICAL_SOLUTION[:2]
    assert len(excinfo.value.x_ao) == 2
    assert "pick up key" in str(excinfo.value)


def test_probe_state_capacity(env):
    env.reset()
    state_id, description, capacity = probe_state(env)
    assert state_id == encode_state(env.look(), env.inventory())
    assert capacity == 6 * 4
    assert description.startswith("Currently you see the following things:")
    assert "pantry door" in description


def test_start_record_links_root(env):
    env.reset()
    record = start_record(env)
    assert record.source_id == ROOT_ID
    assert record.action == START_ACTION
    assert record.raw_reward == 0.0
    assert record.valid


def test_state_text_sections():
    text = state_text("This room is called the hallway.", ["agent", "picture"], "nothing")
    assert "Currently you can access the following objects:" in text
    assert "['agent', 'picture']" in text
    assert text.endswith("nothing")
