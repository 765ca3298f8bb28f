# app/schemas/trace.py

from typing import List

from pydantic import BaseModel, ConfigDict, Field

from app.schemas.graph import StateId


class EnvStep(BaseModel):
    """What an environment returns for a single action"""

    observation: str
    raw_reward: float = 0.0
    done: bool = False
    valid: bool = True


class EnvDescription(BaseModel):
    objective: str
    prior_description: str


class ObservationRecord(BaseModel):
    """One x_AO entry"""

    model_config = ConfigDict(frozen=True)

    action: str
    observation: str


class StepRecord(BaseModel):
    """One x_AS entry"""

    model_config = ConfigDict(frozen=True)

    action: str
    observation: str
    raw_reward: float
    transformed_reward: float
    valid: bool
    source_id: StateId
    state_id: StateId
    state_description: str = ""
    action_capacity: int = Field(0, ge=0)


class ExecutionResult(BaseModel):
    x_ao: List[ObservationRecord] = Field(default_factory=list)
    x_as: List[StepRecord] = Field(default_factory=list)
    done: bool = False

    @property
    def interactions(self) -> int:
        return len(self.x_as)

    @property
    def raw_reward(self) -> float:
        return sum(record.raw_reward for record in self.x_as)
