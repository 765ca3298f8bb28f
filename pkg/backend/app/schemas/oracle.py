# app/schemas/oracle.py

import logging
import re
from typing import Iterable, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

logger = logging.getLogger(__name__)

_UNDERSCORE_TOKEN = re.compile(r"\w_|_\w")


def axiom_problem(text: str) -> Optional[str]:
    """Return why a learning line is not a usable 'X Y Z' axiom, or None if it is"""
    if not text.strip():
        return "empty"
    if _UNDERSCORE_TOKEN.search(text):
        return "underscore-joined token"
    if len(text.split()) < 3:
        return "not of the form 'X Y Z'"
    return None


class Learnings(BaseModel):
    """Belief axioms carried between episodes"""

    model_config = ConfigDict(frozen=True)

    axioms: List[str] = Field(default_factory=list)

    @field_validator("axioms")
    @classmethod
    def _check_axioms(cls, axioms: List[str]) -> List[str]:
        for axiom in axioms:
            problem = axiom_problem(axiom)
            if problem:
                raise ValueError(f"Invalid axiom {axiom!r}: {problem}")
        if len(set(axioms)) != len(axioms):
            raise ValueError("Duplicate axioms")
        return axioms

    @classmethod
    def from_lines(cls, lines: Iterable[str]) -> "Learnings":
        """Keep the valid, first-seen lines; log the rest"""
        kept: List[str] = []
        for raw in lines:
            line = raw.strip()
            problem = axiom_problem(line)
            if problem:
                logger.warning(f"Dropping learning {raw!r}: {problem}")
                continue
            if line in kept:
                logger.debug(f"Dropping duplicate learning {line!r}")
                continue
            kept.append(line)
        return cls(axioms=kept)


class PromptContext(BaseModel):
    """Everything the action plan generator prompt is rendered from"""

    model_config = ConfigDict(frozen=True)

    objective: str
    prior_axioms: str = ""
    learnings: List[str] = Field(default_factory=list)
    current_state_text: str = ""
    avoided_actions: List[str] = Field(default_factory=list)
    trace: str = ""
    plan_examples: str = ""


class ExplorationCounter(BaseModel):
    """How many times the exploration objective has been used"""

    count: int = Field(0, ge=0)
