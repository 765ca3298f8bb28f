# app/services/agents/prompts.py

from typing import Sequence

from app.models.enums import PromptKind
from app.schemas.oracle import PromptContext
from app.schemas.trace import ObservationRecord
from app.services.planning.plan_selector import render_instructions

EXPLORATION_OBJECTIVE = "Create a long sequence of actions to explore and know more about the environment"

DEFAULT_PLAN_EXAMPLES = (
    'Example 1:\n["look around", "open door to greenhouse"]\n\n'
    'Example 2:\n["go door to hallway", "open door to kitchen"]'
)

ACTION_PLAN_SYSTEM = """You are an AI action planner for an autonomous agent situated in the task environment described by the user. The prior axioms are fixed rules and constraints of the environment; the belief axioms are your current beliefs about it. Generate an action plan: a sequence of actions that meets the objective of the environment. Do not add any explanation. The output must be a list of actions.

Here are some example outputs.

{actionplanexamples}

Here are some historical traces of action and observation:

{envtrace}"""

ACTION_PLAN_USER = """Generate the action plan for the following environment. If there are ADDITIONAL INSTRUCTIONS, give the ADDITIONAL INSTRUCTIONS the HIGHEST PRIORITY when generating the action plan.

Environment:

{environment}

ADDITIONAL INSTRUCTIONS:

{instructions}"""

LEARNER_SYSTEM = """You are an expert assistant. You are given an ACTION OBSERVATION TRACE: the actions an agent took in an environment while working on a task, and the perceptions it received.

Derive comprehensive LEARNINGS as BELIEF AXIOMS that capture every detail of the ACTION OBSERVATION TRACE and that will help the agent accomplish the SAME objective AGAIN in the SAME environment.

Each line must have the form:

X Y Z

where X and Z are entities, subjects, objects or events from the trace and Y is the relation between X and Z. DO NOT add "_" in X, Y or Z.

Build on the current belief axioms of the environment. Keep existing beliefs; modify or remove one only if it contradicts the ACTION OBSERVATION TRACE. Add new beliefs as needed.

The output must STRICTLY be a list in which every element is a text enclosed in DOUBLE QUOTES, escaped where required. DO NOT wrap the list in code tags.

[<list of learnings without redundant or contradicting statements>]

Here are the environment objective and the current belief axioms. Update and output the belief axioms based on the action observation trace provided by the user.

Environment:

{environment}"""

LEARNER_USER = """Here is the action observation trace. Provide the belief axioms for it. COMBINE MULTIPLE LINES OF BELIEF AXIOMS INTO ONE, WHEREVER POSSIBLE.

Action observation trace:

{envtrace}

Here is the feedback on the overall progress of the agent:

{feedback}"""

FORMAT_REMINDER = (
    "\n\nYOUR PREVIOUS ANSWER COULD NOT BE PARSED. Reply with ONLY a list of double-quoted strings, "
    'for example ["look around", "open door to kitchen"].'
)


def prompt_kind(system: str) -> PromptKind:
    return PromptKind.LEARNER if system.startswith(LEARNER_SYSTEM[:40]) else PromptKind.ACTION_PLAN


def render_trace(trace: Sequence[ObservationRecord]) -> str:
    if not trace:
        return "No actions have been taken yet."
    return "\n".join(f"action: {record.action}\nobservation: {record.observation}" for record in trace)


def render_axioms(axioms: Sequence[str]) -> str:
    return "\n".join(axioms) if axioms else "none yet"


def render_environment(objective: str, prior_axioms: str, axioms: Sequence[str]) -> str:
    sections = [f"objective:\n{objective}"]
    if prior_axioms:
        sections.append(f"prior axioms:\n{prior_axioms}")
    sections.append(f"belief axioms:\n{render_axioms(axioms)}")
    return "\n\n".join(sections)


def render_action_plan_prompt(ctx: PromptContext) -> tuple[str, str]:
    """(system, user) prompt pair; a pure function of the context"""
    system = ACTION_PLAN_SYSTEM.format(
        actionplanexamples=ctx.plan_examples or DEFAULT_PLAN_EXAMPLES,
        envtrace=ctx.trace or render_trace([]),
    )
    user = ACTION_PLAN_USER.format(
        environment=render_environment(ctx.objective, ctx.prior_axioms, ctx.learnings),
        instructions=render_instructions(ctx.current_state_text, ctx.avoided_actions),
    )
    return system, user


def render_learner_prompt(trace: Sequence[ObservationRecord], feedback: str, axioms: Sequence[str], objective: str) -> tuple[str, str]:
    system = LEARNER_SYSTEM.format(environment=render_environment(objective, "", axioms))
    user = LEARNER_USER.format(envtrace=render_trace(trace), feedback=feedback)
    return system, user
