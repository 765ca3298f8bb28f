# app/services/agents/action_plan_generator.py

import logging
import math
from typing import List, Protocol, Tuple

from app.schemas.oracle import ExplorationCounter, PromptContext
from app.services.agents.base_agent import BaseAgent
from app.services.agents.prompts import EXPLORATION_OBJECTIVE, render_action_plan_prompt
from app.services.oracle.base_oracle import OracleClient

logger = logging.getLogger(__name__)

MAX_EXPLORE_PROBABILITY = 0.5


class UniformSource(Protocol):
    def random(self) -> float:
        ...


def exploration_probability(sigma: float, n_exp: int) -> float:
    """sigma / ln(N_exp), with N_exp floored at 2 and the result capped at 0.5"""
    return min(MAX_EXPLORE_PROBABILITY, sigma / math.log(max(n_exp, 2)))


def maybe_substitute_objective(
    ctx: PromptContext,
    counter: ExplorationCounter,
    rng: UniformSource,
    sigma: float,
) -> Tuple[PromptContext, bool]:
    """Swap the task objective for the exploration objective with the exploration probability"""
    if not 0 < sigma < 0.5:
        raise ValueError(f"sigma must be in (0, 0.5), got {sigma}")
    probability = exploration_probability(sigma, counter.count)
    if rng.random() >= probability:
        return ctx, False
    counter.count += 1
    logger.info(f"Using the exploration objective (p={probability:.4f}, N_exp={counter.count})")
    return ctx.model_copy(update={"objective": EXPLORATION_OBJECTIVE}), True


class ActionPlanGenerator(BaseAgent):
    """Turns a prompt context into the oracle's action plan suffix"""

    def generate_action_plan(self, ctx: PromptContext) -> List[str]:
        system, user = render_action_plan_prompt(ctx)
        actions = [action.strip() for action in self._ask_for_string_list(system, user) if action.strip()]
        logger.info(f"Oracle proposed {len(actions)} actions: {actions}")
        return actions


def generate_action_plan(ctx: PromptContext, client: OracleClient, max_retries: int = 2) -> List[str]:
    return ActionPlanGenerator(client, max_retries=max_retries).generate_action_plan(ctx)
