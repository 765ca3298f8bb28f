from app.services.environment.toy_world import (
    ACTION_TEMPLATES,
    CANONICAL_SOLUTION,
    GOAL_REWARD,
    OBJECTIVE,
    UNKNOWN_ACTION,
    toy_world,
)
from conftest import candidate_actions


def run(world, plan):
    world.reset()
    return [world.step(action) for action in plan]


def test_reset_is_deterministic(env):
    first = env.reset()
    env.step("go kitchen")
    assert env.reset() == first
    assert first.startswith("This room is called the hallway.")


def test_canonical_solution_completes_task(env):
    steps = run(env, CANONICAL_SOLUTION)
    assert sum(step.raw_reward for step in steps) == GOAL_REWARD
    assert steps[-1].done
    assert not any(step.done for step in steps[:-1])
    assert all(step.valid for step in steps)
    assert [step.raw_reward for step in steps] == [0.25, 0.0, 0.25, 0.0, 0.0, 0.5]


def test_bfs_finds_canonical_length(bfs_solution):
    assert bfs_solution is not None
    assert len(bfs_solution) == len(CANONICAL_SOLUTION)


def test_no_plan_exceeds_goal_reward(env, bfs_solution):
    steps = run(env, bfs_solution)
    assert sum(step.raw_reward for step in steps) == GOAL_REWARD


def test_key_cannot_be_taken_from_closed_drawer(env):
    steps = run(env, ["go kitchen", "pick up key"])
    assert not steps[1].valid
    assert steps[1].observation == UNKNOWN_ACTION
    assert env.inventory().endswith("nothing")


def test_kitchen_reward_only_once(env):
    steps = run(env, ["go kitchen", "go hallway", "go kitchen"])
    assert [step.raw_reward for step in steps] == [0.25, 0.0, 0.0]


def test_locked_door_messages_are_valid_no_ops(env):
    env.reset()
    before = env.look()
    for action in ("go pantry", "open pantry door"):
        step = env.step(action)
        assert step.valid
        assert step.raw_reward == 0.0
    assert env.look() == before


def test_pantry_reachable_after_opening(env):
    run(env, CANONICAL_SOLUTION)
    assert "pantry" in env.accessible_objects()


def test_accessible_objects_follow_rooms(env):
    env.reset()
    assert env.accessible_objects() == ["agent", "picture", "kitchen", "pantry door"]
    env.step("go kitchen")
    assert env.accessible_objects() == ["agent", "drawer", "hallway"]
    env.step("open drawer")
    assert "key" in env.accessible_objects()
    env.step("pick up key")
    env.step("go hallway")
    assert env.accessible_objects()[-1] == "key"


def test_describe_and_templates(env):
    description = env.describe()
    assert description.objective == OBJECTIVE
    assert "look around" in description.prior_description
    assert env.action_templates() == ACTION_TEMPLATES


def test_snapshot_and_restore(env):
    env.reset()
    env.step("go kitchen")
    saved = env.snapshot()
    env.step("open drawer")
    env.restore(saved)
    assert "closed" in env.look()


def test_candidate_actions_cover_solution():
    world = toy_world()
    world.reset()
    for action in CANONICAL_SOLUTION:
        assert action in candidate_actions(world)
        world.step(action)
