# app/models/enums.py

from enum import Enum as PyEnum


class StopReason(str, PyEnum):
    LEAF = "leaf"
    EXPLORE_TRIGGER = "explore_trigger"
    LOOP = "loop"
    ALL_CHILDREN_INVALID = "all_children_invalid"


class KFactorSource(str, PyEnum):
    PARENT = "parent"
    CHILD = "child"


class EnvironmentKind(str, PyEnum):
    TOY = "toy"
    BRIDGE = "bridge"


class OracleKind(str, PyEnum):
    MOCK = "mock"
    LIVE = "live"


class PromptKind(str, PyEnum):
    ACTION_PLAN = "action_plan"
    LEARNER = "learner"
