# app/services/environment/base_env.py

from abc import ABC, abstractmethod
from typing import List

from app.schemas.trace import EnvDescription, EnvStep

LOOK_ACTION = "look around"


class EnvAdapter(ABC):
    """Base class for every deterministic text environment the planner can drive"""

    @abstractmethod
    def reset(self) -> str:
        """Restart the task and return the initial observation"""

    @abstractmethod
    def step(self, action: str) -> EnvStep:
        pass

    @abstractmethod
    def describe(self) -> EnvDescription:
        pass

    @abstractmethod
    def accessible_objects(self) -> List[str]:
        pass

    @abstractmethod
    def action_templates(self) -> List[str]:
        pass

    @abstractmethod
    def inventory(self) -> str:
        pass

    def look(self) -> str:
        """Observation describing the current location; used as the state probe"""
        return self.step(LOOK_ACTION).observation

    def close(self) -> None:
        pass
