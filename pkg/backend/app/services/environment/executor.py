# app/services/environment/executor.py

import logging
import math
from typing import List, Optional, Sequence, Tuple

from app.exceptions import ExecutionError
from app.schemas.graph import INVALID_ID, ROOT_ID, StateId
from app.schemas.trace import ExecutionResult, ObservationRecord, StepRecord
from app.services.environment.base_env import EnvAdapter
from app.services.graph.state_graph import encode_state

logger = logging.getLogger(__name__)

START_ACTION = "start"


def signed_log1p(reward: float) -> float:
    """sign(r) * ln(1 + |r|)"""
    return math.copysign(math.log1p(abs(reward)), reward) if reward else 0.0


def state_text(look: str, objects: Sequence[str], inventory: str) -> str:
    """Human-readable state description stored on graph nodes and shown to the oracle"""
    parts = ["Currently you see the following things:", look.strip()]
    if objects:
        parts += ["Currently you can access the following objects:", repr(list(objects))]
    parts += ["The agent has following things in its inventory.", inventory.strip()]
    return "\n\n".join(parts)


def probe_state(env: EnvAdapter) -> Tuple[StateId, str, int]:
    """Encode the environment's current latent state without counting an interaction.

    Returns (state id, description, estimated action capacity).
    """
    look = env.look()
    inventory = env.inventory()
    objects = env.accessible_objects()
    capacity = len(env.action_templates()) * len(objects)
    return encode_state(look, inventory), state_text(look, objects, inventory), capacity


def start_record(env: EnvAdapter) -> StepRecord:
    """ROOT -> start-state link for a freshly reset environment"""
    try:
        state_id, description, capacity = probe_state(env)
    except ExecutionError:
        raise
    except Exception as e:
        raise ExecutionError(f"Environment probe failed after reset: {str(e)}") from e
    return StepRecord(
        action=START_ACTION,
        observation=description,
        raw_reward=0.0,
        transformed_reward=0.0,
        valid=True,
        source_id=ROOT_ID,
        state_id=state_id,
        state_description=description,
        action_capacity=capacity,
    )


def execute_plan(env: EnvAdapter, plan: Sequence[str], source: Optional[StateId] = None) -> ExecutionResult:
    """Run `plan` in order, recording x_AO and x_AS, stopping early once the task is done.

    `source` is the latent state the environment is in; it is probed when omitted.
    """
    x_ao: List[ObservationRecord] = []
    x_as: List[StepRecord] = []
    if not plan:
        return ExecutionResult()

    action: Optional[str] = None
    try:
        current = source if source is not None else probe_state(env)[0]
        done = False
        for action in plan:
            outcome = env.step(action)
            x_ao.append(ObservationRecord(action=action, observation=outcome.observation))
            if outcome.valid:
                state_id, description, capacity = probe_state(env)
            else:
                state_id, description, capacity = INVALID_ID, "", 0
            x_as.append(StepRecord(
                action=action,
                observation=outcome.observation,
                raw_reward=outcome.raw_reward,
                transformed_reward=signed_log1p(outcome.raw_reward),
                valid=outcome.valid,
                source_id=current,
                state_id=state_id,
                state_description=description,
                action_capacity=capacity,
            ))
            if outcome.valid:
                current = state_id
            else:
                logger.debug(f"Invalid action {action!r}: {outcome.observation!r}")
            if outcome.done:
                done = True
                break
    except ExecutionError as e:
        e.x_ao, e.x_as = x_ao, x_as
        raise
    except Exception as e:
        stage = f"during {action!r}" if action is not None else "while probing the start state"
        raise ExecutionError(f"Environment failed {stage}: {str(e)}", x_ao, x_as) from e

    logger.info(f"Executed {len(x_as)}/{len(plan)} actions, reward {sum(r.raw_reward for r in x_as):.3f}, done={done}")
    return ExecutionResult(x_ao=x_ao, x_as=x_as, done=done)
