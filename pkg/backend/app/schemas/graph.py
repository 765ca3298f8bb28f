# app/schemas/graph.py

from typing import List

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr

from app.models.enums import KFactorSource

StateId = str

# Reserved ids. Encoded states are 64-char hex digests, so these never collide.
ROOT_ID: StateId = "ROOT"
INVALID_ID: StateId = "INVALID"

GRAPH_FILE_VERSION = 1


class ValueConfig(BaseModel):
    """Step size, discount and exploration constants for value learning and plan selection"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    alpha: float = Field(0.1, gt=0, le=1, description="TD(0) step size")
    gamma: float = Field(0.95, gt=0, lt=1, description="Discount factor")
    exploration_constant: float = Field(2 ** 0.5, gt=0, description="C in the UCB bonus")
    v_default: float = Field(0.1, description="Value of a state nobody has explored yet")
    v_invalid: float = Field(-1.0, description="Value held by the invalid sink")
    n_exponent: float = Field(2.0, gt=1, description="Non-linearity of the exploration factor")
    max_sweeps: int = Field(200, ge=1)
    convergence_eps: float = Field(1e-4, gt=0, description="Mean |delta V| below which sweeping stops")
    k_factor_source: KFactorSource = KFactorSource.PARENT


class StateNode(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: StateId
    description: str
    value: float
    visits: int = Field(ge=0)
    action_capacity: int = Field(0, ge=0)
    actions_tried: List[str] = Field(default_factory=list)

    # V+ and K_s are derived from the graph; they are recomputed after loading.
    _augmented_value: float = PrivateAttr(default=0.0)
    _k_factor: float = PrivateAttr(default=1.0)

    @property
    def augmented_value(self) -> float:
        return self._augmented_value

    @property
    def k_factor(self) -> float:
        return self._k_factor

    def set_derived(self, augmented_value: float, k_factor: float) -> None:
        self._augmented_value = augmented_value
        self._k_factor = k_factor

    def mark_tried(self, action: str) -> None:
        if action not in self.actions_tried:
            self.actions_tried.append(action)
            self.actions_tried.sort()


class GraphEdge(BaseModel):
    model_config = ConfigDict(extra="forbid")

    action: str
    reward: float
    source: StateId
    sink: StateId
    traversals: int = Field(1, ge=1)


class SweepReport(BaseModel):
    sweeps_run: int
    final_mean_abs_delta: float


class GraphDocument(BaseModel):
    """On-disk shape of a persisted state graph"""

    model_config = ConfigDict(extra="forbid")

    version: int
    config_echo: ValueConfig
    nodes: List[StateNode]
    edges: List[GraphEdge]
    root: StateId
    invalid: StateId
