# app/schemas/run.py

from datetime import datetime
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from app.models.enums import StopReason


class EpisodeConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    rounds_per_episode: int = Field(5, ge=1)
    max_episodes: int = Field(20, ge=1)
    sigma: float = Field(0.3, gt=0, lt=0.5)
    goal_reward: float = Field(1.0, gt=0)


class RoundTrace(BaseModel):
    round: int
    selected_actions: List[str] = Field(default_factory=list)
    avoided_actions: List[str] = Field(default_factory=list)
    stop_reason: StopReason
    start_state: str
    oracle_actions: List[str] = Field(default_factory=list)
    used_exploration: bool = False
    oracle_failed: bool = False
    steps: int = 0
    raw_reward: float = 0.0


class EpisodeReport(BaseModel):
    index: int
    round_traces: List[RoundTrace] = Field(default_factory=list)
    cumulative_raw_reward: float = 0.0
    cumulative_transformed_reward: float = 0.0
    feedback_text: str = ""
    interactions: int = 0
    done: bool = False
    error: Optional[str] = None


class RunReport(BaseModel):
    episodes: List[EpisodeReport] = Field(default_factory=list)
    total_interactions: int = 0
    solved: bool = False
    error: Optional[str] = None
    started_at: Optional[datetime] = None
    finished_at: Optional[datetime] = None
