# app/services/agents/planner_agent.py

import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, List, Optional, Sequence

import numpy as np

from app.exceptions import ExecutionError, OracleError, OracleFormatError
from app.schemas.graph import ValueConfig
from app.schemas.oracle import ExplorationCounter, Learnings, PromptContext
from app.schemas.run import EpisodeConfig, EpisodeReport, RoundTrace, RunReport
from app.schemas.trace import ObservationRecord, StepRecord
from app.services.agents.action_plan_generator import ActionPlanGenerator, UniformSource, maybe_substitute_objective
from app.services.agents.learner import Learner
from app.services.agents.prompts import render_trace
from app.services.environment.base_env import EnvAdapter
from app.services.environment.executor import execute_plan, start_record
from app.services.graph.state_graph import StateGraph
from app.services.oracle.base_oracle import OracleClient
from app.services.planning.plan_selector import select_plan
from app.utils.file_handler import FileHandler

logger = logging.getLogger(__name__)

FEEDBACK_NO_PROGRESS = "The agent performed very poorly and could not make any progress towards solving the task."
FEEDBACK_SOME_PROGRESS = "The agent performed poorly and made some progress but not enough to solve the task."
FEEDBACK_GOOD_PROGRESS = "The agent performed well and made significant progress but not enough to solve the task."
FEEDBACK_SOLVED = "The agent successfully solved the task."

RoundCallback = Callable[[EpisodeReport, RoundTrace], None]
EpisodeCallback = Callable[[EpisodeReport], None]


def get_feedback(x_as: Sequence[StepRecord], goal_reward: float = 1.0) -> str:
    """Map an episode's reward total onto the feedback ladder"""
    raw = sum(record.raw_reward for record in x_as)
    transformed = sum(record.transformed_reward for record in x_as)
    ratio = raw / goal_reward
    if ratio >= 1.0:
        sentence = FEEDBACK_SOLVED
    elif ratio >= 0.5:
        sentence = FEEDBACK_GOOD_PROGRESS
    elif ratio > 0:
        sentence = FEEDBACK_SOME_PROGRESS
    else:
        sentence = FEEDBACK_NO_PROGRESS
    return f"{sentence} Total reward: {raw:g} (log-scaled {transformed:.4f})."


def _now() -> datetime:
    return datetime.now(timezone.utc)


class PlannerAgent:
    """Runs episodes of graph-guided, oracle-completed action plans.

    Each round commits the best known prefix from the state graph, lets the
    oracle finish the plan from where the prefix ends, executes the whole plan
    and folds the trace back into the graph. Each episode ends with feedback
    and a learner pass over the episode's action/observation trace.
    """

    def __init__(
        self,
        graph: StateGraph,
        oracle: OracleClient,
        episode_config: Optional[EpisodeConfig] = None,
        value_config: Optional[ValueConfig] = None,
        learnings: Optional[Learnings] = None,
        rng: Optional[UniformSource] = None,
        seed: int = 0,
        max_retries: int = 2,
        trace_log_path: Optional[Path] = None,
        on_round_complete: Optional[RoundCallback] = None,
        on_episode_complete: Optional[EpisodeCallback] = None,
    ):
        self.graph = graph
        self.episode_config = episode_config or EpisodeConfig()
        self.value_config = value_config or graph.config
        self.learnings = learnings or Learnings()
        self.rng = rng if rng is not None else np.random.default_rng(seed)
        self.exploration_counter = ExplorationCounter()
        self.trace_log_path = trace_log_path
        self.on_round_complete = on_round_complete
        self.on_episode_complete = on_episode_complete
        self.action_plan_generator = ActionPlanGenerator(oracle, max_retries=max_retries)
        self.learner = Learner(oracle, max_retries=max_retries)

    def solve(self, env: EnvAdapter) -> RunReport:
        logger.info("=== Planner Agent Started ===")
        report = RunReport(started_at=_now())

        for index in range(1, self.episode_config.max_episodes + 1):
            episode = EpisodeReport(index=index)
            report.episodes.append(episode)
            try:
                self._run_episode(env, episode)
            except (ExecutionError, OracleError) as e:
                episode.error = str(e)
                report.error = f"Episode {index} aborted: {str(e)}"
                logger.error(report.error)
                break
            finally:
                report.total_interactions += episode.interactions

            logger.info(
                f"Episode {index} finished: reward {episode.cumulative_raw_reward:g}, "
                f"{episode.interactions} interactions, done={episode.done}"
            )
            if episode.done:
                report.solved = True
                break

        report.finished_at = _now()
        logger.info(
            f"=== Planner Agent Finished: solved={report.solved}, episodes={len(report.episodes)}, "
            f"interactions={report.total_interactions} ==="
        )
        return report

    # ---- episode ------------------------------------------------------------

    def _run_episode(self, env: EnvAdapter, episode: EpisodeReport) -> None:
        try:
            env.reset()
            description = env.describe()
        except ExecutionError:
            raise
        except Exception as e:
            raise ExecutionError(f"Environment reset failed: {str(e)}") from e

        start = start_record(env)
        self.graph.update([start], self.value_config)
        current = start.state_id

        x_ao: List[ObservationRecord] = []
        x_as: List[StepRecord] = []

        for round_index in range(1, self.episode_config.rounds_per_episode + 1):
            plan = select_plan(self.graph, current, self.value_config)
            ctx = PromptContext(
                objective=description.objective,
                prior_axioms=description.prior_description,
                learnings=list(self.learnings.axioms),
                current_state_text=plan.terminal_description,
                avoided_actions=plan.avoided_actions,
                trace=render_trace(x_ao),
            )
            ctx, used_exploration = maybe_substitute_objective(
                ctx, self.exploration_counter, self.rng, self.episode_config.sigma
            )

            oracle_failed = False
            try:
                suffix = self.action_plan_generator.generate_action_plan(ctx)
            except OracleFormatError as e:
                logger.warning(f"Round {round_index}: {str(e)}; continuing with the committed prefix only")
                suffix = []
                oracle_failed = True

            trace = RoundTrace(
                round=round_index,
                selected_actions=plan.actions,
                avoided_actions=plan.avoided_actions,
                stop_reason=plan.stop_reason,
                start_state=current,
                oracle_actions=suffix,
                used_exploration=used_exploration,
                oracle_failed=oracle_failed,
            )

            try:
                result = execute_plan(env, plan.actions + suffix, source=current)
            except ExecutionError as e:
                # keep what was learned before the adapter failed
                self._fold(episode, trace, e.x_ao, e.x_as, x_ao, x_as)
                episode.round_traces.append(trace)
                raise

            self._fold(episode, trace, result.x_ao, result.x_as, x_ao, x_as)
            episode.round_traces.append(trace)
            for record in reversed(result.x_as):
                if record.valid:
                    current = record.state_id
                    break

            if self.on_round_complete is not None:
                self.on_round_complete(episode, trace)

            if result.done or episode.cumulative_raw_reward >= self.episode_config.goal_reward:
                episode.done = True
                logger.info(f"Goal reached in round {round_index}")
                break

        episode.feedback_text = get_feedback(x_as, self.episode_config.goal_reward)
        self.learnings = self.learner.update_learnings(x_ao, episode.feedback_text, self.learnings, description.objective)
        if self.on_episode_complete is not None:
            self.on_episode_complete(episode)

    def _fold(
        self,
        episode: EpisodeReport,
        trace: RoundTrace,
        round_ao: Sequence[ObservationRecord],
        round_as: Sequence[StepRecord],
        x_ao: List[ObservationRecord],
        x_as: List[StepRecord],
    ) -> None:
        """Merge one round's traces into the graph, the episode traces and the reports"""
        if round_as:
            self.graph.update(round_as, self.value_config)
        x_ao.extend(round_ao)
        x_as.extend(round_as)

        trace.steps = len(round_as)
        trace.raw_reward = sum(record.raw_reward for record in round_as)
        episode.interactions += len(round_as)
        episode.cumulative_raw_reward += trace.raw_reward
        episode.cumulative_transformed_reward += sum(record.transformed_reward for record in round_as)

        if self.trace_log_path is not None:
            for step, record in enumerate(round_as, start=1):
                FileHandler.append_jsonl(self.trace_log_path, {
                    "episode": episode.index,
                    "round": trace.round,
                    "step": step,
                    "action": record.action,
                    "observation": record.observation,
                    "raw_reward": record.raw_reward,
                    "transformed_reward": record.transformed_reward,
                    "valid": record.valid,
                    "source_id": record.source_id,
                    "state_id": record.state_id,
                })


def solve(
    env: EnvAdapter,
    graph: StateGraph,
    oracle: OracleClient,
    cfg: Optional[EpisodeConfig] = None,
    **kwargs,
) -> RunReport:
    return PlannerAgent(graph, oracle, episode_config=cfg, **kwargs).solve(env)
