# app/services/planning/plan_selector.py

import logging
from typing import List, Optional, Sequence

from app.models.enums import KFactorSource, StopReason
from app.schemas.graph import INVALID_ID, StateId, ValueConfig
from app.schemas.plan import SelectedPlan
from app.services.graph.state_graph import StateGraph, explore_value, k_augmented_value

logger = logging.getLogger(__name__)

AVOID_HEADER = "You should STRICTLY AVOID the following IMMEDIATE ACTIONS from the current state."


def select_plan(graph: StateGraph, start: StateId, cfg: Optional[ValueConfig] = None) -> SelectedPlan:
    """Walk from `start` along the best augmented-value children.

    The walk stops at a leaf, when every child is invalid, when exploring from the
    current state looks better than its best child, or when the next step would
    revisit a state already on the walk. Expects refresh_augmented_values() to be current.
    """
    cfg = cfg or graph.config
    parent = graph.node(start)
    walk: List[StateId] = [start]
    actions: List[str] = []

    while True:
        children = graph.out_edges(parent.id)
        if not children:
            stop_reason = StopReason.LEAF
            break
        valid = [edge for edge in children if edge.sink != INVALID_ID]
        if not valid:
            stop_reason = StopReason.ALL_CHILDREN_INVALID
            break

        # out_edges is sorted by action, so max() keeps the smallest action on ties
        best = max(valid, key=lambda edge: graph.node(edge.sink).augmented_value)
        child = graph.node(best.sink)

        k_parent = parent.k_factor
        k_metric = k_parent if cfg.k_factor_source == KFactorSource.PARENT else child.k_factor
        child_metric = k_augmented_value(
            child.value, k_metric, cfg.exploration_constant, graph.parent_visits(child.id), child.visits
        )
        parent_explore = explore_value(cfg.v_default, k_parent, cfg.exploration_constant, parent.visits)
        if parent_explore > child_metric:
            stop_reason = StopReason.EXPLORE_TRIGGER
            break
        if child.id in walk:
            stop_reason = StopReason.LOOP
            break

        actions.append(best.action)
        walk.append(child.id)
        parent = child

    # Every action already tried from the final state goes on the avoid list.
    avoided = [edge.action for edge in graph.out_edges(parent.id)]
    plan = SelectedPlan(
        actions=actions,
        terminal_state=parent.id,
        terminal_description=parent.description,
        avoided_actions=avoided,
        stop_reason=stop_reason,
    )
    logger.debug(f"Selected {len(actions)} committed actions, stop={stop_reason.value}, avoid={avoided}")
    return plan


def render_instructions(current_state_text: str, avoided_actions: Sequence[str]) -> str:
    """ADDITIONAL INSTRUCTIONS block for the action plan prompt"""
    lines = ["You are at the state:", "", current_state_text.strip(), "", "find rest of the action plan."]
    if avoided_actions:
        lines[-1] += " " + AVOID_HEADER
        lines.append("")
        lines.extend(avoided_actions)
    return "\n".join(lines)
