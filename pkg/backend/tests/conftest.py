import socket
from collections import deque
from pathlib import Path
from typing import Callable, Dict, List, Optional

import pytest

from app.schemas.graph import ValueConfig
from app.schemas.trace import StepRecord
from app.services.environment.toy_world import CANONICAL_SOLUTION, KeyDoorWorld, WorldState, toy_world
from app.services.graph.state_graph import StateGraph
from app.services.oracle.mock_oracle import ScriptedOracle

GARBAGE_RESPONSES = [
    "I think you should go to the kitchen first.",
    "Plan: go kitchen, open drawer",
    '{"actions": ["go kitchen"]}',
    "[go kitchen, open drawer]",
    '["go kitchen", 3]',
    "Sorry, I cannot help with that.",
]


@pytest.fixture(autouse=True)
def no_network(monkeypatch):
    """Any attempt to open a network connection fails the test"""

    def guarded_connect(self, address):
        raise AssertionError(f"Network access attempted: {address!r}")

    monkeypatch.setattr(socket.socket, "connect", guarded_connect)
    monkeypatch.setattr(socket.socket, "connect_ex", guarded_connect)


@pytest.fixture
def value_config() -> ValueConfig:
    return ValueConfig()


@pytest.fixture
def zero_config() -> ValueConfig:
    """New states start at 0 so hand-computed backups stay exact"""
    return ValueConfig(alpha=1.0, gamma=0.9, v_default=0.0, max_sweeps=50, convergence_eps=1e-12)


@pytest.fixture
def env() -> KeyDoorWorld:
    return toy_world()


@pytest.fixture
def canonical_oracle() -> ScriptedOracle:
    return ScriptedOracle(plan_responses=[CANONICAL_SOLUTION])


@pytest.fixture
def noisy_oracle() -> ScriptedOracle:
    # two rounds of three unparsable answers each before the real plan
    return ScriptedOracle(plan_responses=[*GARBAGE_RESPONSES, CANONICAL_SOLUTION])


def make_record(
    source: str,
    action: str,
    sink: str,
    reward: float = 0.0,
    valid: bool = True,
    capacity: int = 0,
) -> StepRecord:
    return StepRecord(
        action=action,
        observation=f"observation after {action}",
        raw_reward=reward,
        transformed_reward=reward,
        valid=valid,
        source_id=source,
        state_id=sink,
        state_description=f"state {sink}",
        action_capacity=capacity,
    )


@pytest.fixture
def record() -> Callable[..., StepRecord]:
    return make_record


def candidate_actions(world: KeyDoorWorld) -> List[str]:
    """Every template filled with every accessible object"""
    objects = world.accessible_objects()
    actions = ["look around", "inventory"]
    for obj in objects:
        actions += [f"go {obj}", f"open {obj}", f"pick up {obj}"]
        actions += [f"use {obj} on {other}" for other in objects if other != obj]
    return actions


def shortest_solution(world: Optional[KeyDoorWorld] = None) -> Optional[List[str]]:
    """Breadth-first search over the toy world's full state space"""
    world = world or toy_world()
    world.reset()
    start = world.snapshot()
    parents: Dict[WorldState, Optional[tuple]] = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        if state.done:
            plan: List[str] = []
            while parents[state] is not None:
                state, action = parents[state]
                plan.append(action)
            return list(reversed(plan))
        world.restore(state)
        for action in candidate_actions(world):
            world.restore(state)
            outcome = world.step(action)
            if not outcome.valid:
                continue
            successor = world.snapshot()
            if successor not in parents:
                parents[successor] = (state, action)
                queue.append(successor)
    return None


@pytest.fixture(scope="session")
def bfs_solution() -> List[str]:
    return shortest_solution()


@pytest.fixture
def chain_graph(zero_config) -> StateGraph:
    """ROOT -> A -> B -> C with rewards 0 then 1"""
    graph = StateGraph(zero_config)
    graph.upsert_transition(make_record("ROOT", "start", "A"))
    graph.upsert_transition(make_record("A", "go b", "B", reward=0.0))
    graph.upsert_transition(make_record("B", "go c", "C", reward=1.0))
    return graph


@pytest.fixture
def write_run_config(tmp_path) -> Callable[..., Path]:
    """Write a run config (plus an optional mock script) into tmp_path"""

    def _write(body: str = "", script: Optional[str] = None, name: str = "run.toml") -> Path:
        if script is not None:
            (tmp_path / "script.json").write_text(script, encoding="utf-8")
        path = tmp_path / name
        path.write_text(body, encoding="utf-8")
        return path

    return _write
