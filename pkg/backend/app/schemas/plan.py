# app/schemas/plan.py

from typing import List

from pydantic import BaseModel, Field

from app.models.enums import StopReason
from app.schemas.graph import StateId


class SelectedPlan(BaseModel):
    actions: List[str] = Field(default_factory=list)
    terminal_state: StateId
    terminal_description: str = ""
    avoided_actions: List[str] = Field(default_factory=list)
    stop_reason: StopReason
