# app/services/graph/state_graph.py

import hashlib
import logging
import math
from typing import Dict, Iterable, List, Optional

import networkx as nx

from app.exceptions import GraphStructureError, StateLookupError
from app.schemas.graph import (
    INVALID_ID,
    ROOT_ID,
    GraphEdge,
    StateId,
    StateNode,
    SweepReport,
    ValueConfig,
)
from app.schemas.trace import StepRecord

logger = logging.getLogger(__name__)


def canonicalize(text: str) -> str:
    """Collapse whitespace runs and case-fold"""
    return " ".join(text.split()).casefold()


def encode_state(observation_text: str, inventory_text: str = "") -> StateId:
    """Digest of the canonical observation + inventory text"""
    if not observation_text or not observation_text.strip():
        raise ValueError("observation_text must be nonempty")
    canonical = f"observation:{canonicalize(observation_text)}\ninventory:{canonicalize(inventory_text)}"
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _log_floor(total: float) -> float:
    # ln N floored at 0 for N <= 1
    return math.log(total) if total > 1 else 0.0


def exploration_bonus(exploration_constant: float, parent_visits: float, visits: int) -> float:
    """C * sqrt(ln N / n_s)"""
    if visits <= 0:
        return 0.0
    return exploration_constant * math.sqrt(_log_floor(parent_visits) / visits)


def k_factor(action_capacity: int, tried: int, n_exponent: float) -> float:
    """Fraction of untried actions raised to n. Unknown capacity (0) keeps exploration fully open."""
    if action_capacity <= 0:
        return 1.0
    untried = max(action_capacity - tried, 0)
    return (untried / action_capacity) ** n_exponent


def explore_value(v_default: float, k: float, exploration_constant: float, visits: int) -> float:
    """Default exploration value of a parent: V_default + K C sqrt(ln n_s)"""
    return v_default + k * exploration_constant * math.sqrt(_log_floor(visits))


def k_augmented_value(value: float, k: float, exploration_constant: float, parent_visits: float, visits: int) -> float:
    """V(s') + K C sqrt(ln N / n_s')"""
    return value + k * exploration_bonus(exploration_constant, parent_visits, visits)


class StateGraph:
    """State-space graph learned from experience.

    Nodes are latent states keyed by their encoded id; edges are actions, one per
    (source, action) pair. A fixed ROOT links to every episode's start state and
    every invalid action sinks at the fixed INVALID node.
    """

    def __init__(self, config: Optional[ValueConfig] = None):
        self.config = config or ValueConfig()
        self.graph = nx.MultiDiGraph()
        self._add_node(StateNode(id=ROOT_ID, description="root", value=0.0, visits=0))
        self._add_node(StateNode(id=INVALID_ID, description="invalid", value=self.config.v_invalid, visits=0))

    # ---- lookups ----------------------------------------------------------

    def _add_node(self, node: StateNode) -> None:
        self.graph.add_node(node.id, data=node)

    def has_node(self, state_id: StateId) -> bool:
        return state_id in self.graph

    def node(self, state_id: StateId) -> StateNode:
        if state_id not in self.graph:
            raise StateLookupError(state_id)
        return self.graph.nodes[state_id]["data"]

    def nodes(self) -> List[StateNode]:
        return [data for _, data in self.graph.nodes(data="data")]

    def data_nodes(self) -> List[StateNode]:
        return [node for node in self.nodes() if node.id not in (ROOT_ID, INVALID_ID)]

    def edges(self) -> List[GraphEdge]:
        return [data for _, _, data in self.graph.edges(data="data")]

    def out_edges(self, state_id: StateId) -> List[GraphEdge]:
        """Outgoing edges sorted by action text"""
        if state_id not in self.graph:
            raise StateLookupError(state_id)
        edges = [data for _, _, data in self.graph.out_edges(state_id, data="data")]
        return sorted(edges, key=lambda edge: edge.action)

    def edge(self, source: StateId, action: str) -> Optional[GraphEdge]:
        for _, _, data in self.graph.out_edges(source, data="data"):
            if data.action == action:
                return data
        return None

    def parents(self, state_id: StateId) -> List[StateId]:
        return sorted(set(self.graph.predecessors(state_id)))

    def parent_visits(self, state_id: StateId) -> int:
        """N for a state: summed visits of its distinct parents"""
        return sum(self.node(parent).visits for parent in self.parents(state_id))

    @property
    def edge_count(self) -> int:
        return self.graph.number_of_edges()

    @property
    def invalid_edge_count(self) -> int:
        return self.graph.in_degree(INVALID_ID)

    # ---- learning ---------------------------------------------------------

    def upsert_transition(self, record: StepRecord) -> None:
        if record.source_id not in self.graph or record.source_id == INVALID_ID:
            raise GraphStructureError(
                f"Unknown source state {record.source_id!r} for action {record.action!r}; "
                "link the episode start to ROOT first"
            )
        source = self.node(record.source_id)
        sink_id = record.state_id if record.valid else INVALID_ID

        if sink_id in self.graph:
            sink = self.node(sink_id)
            sink.visits += 1
        else:
            sink = StateNode(
                id=sink_id,
                description=record.state_description,
                value=self.config.v_default,
                visits=1,
            )
            self._add_node(sink)
        if sink_id != INVALID_ID and record.action_capacity > 0:
            sink.action_capacity = record.action_capacity

        existing = self.edge(record.source_id, record.action)
        if existing is None:
            edge = GraphEdge(
                action=record.action,
                reward=record.transformed_reward,
                source=record.source_id,
                sink=sink_id,
            )
            self.graph.add_edge(record.source_id, sink_id, key=record.action, data=edge)
        else:
            if existing.sink != sink_id:
                logger.warning(
                    f"Environment determinism violated: {record.action!r} from {record.source_id[:12]} "
                    f"went to {sink_id[:12]}, previously {existing.sink[:12]}; keeping the latest"
                )
                self.graph.remove_edge(existing.source, existing.sink, key=existing.action)
                existing.sink = sink_id
                self.graph.add_edge(record.source_id, sink_id, key=record.action, data=existing)
                self._drop_unreachable()
            if existing.reward != record.transformed_reward:
                logger.warning(
                    f"Environment determinism violated: reward for {record.action!r} changed "
                    f"{existing.reward} -> {record.transformed_reward}; keeping the latest"
                )
            existing.reward = record.transformed_reward
            existing.traversals += 1

        if record.source_id == ROOT_ID:
            source.visits += 1
        source.mark_tried(record.action)

    def _drop_unreachable(self) -> None:
        """Remove data states that no edge path from ROOT reaches any more"""
        reachable = nx.descendants(self.graph, ROOT_ID)
        orphans = sorted(
            state_id for state_id in self.graph
            if state_id not in reachable and state_id not in (ROOT_ID, INVALID_ID)
        )
        if orphans:
            logger.warning(f"Dropping {len(orphans)} state(s) no longer reachable from ROOT: {[s[:12] for s in orphans]}")
            self.graph.remove_nodes_from(orphans)

    def value_sweep(self, cfg: Optional[ValueConfig] = None) -> SweepReport:
        """TD(0) over every node and each of its valid children, until converged or max_sweeps"""
        cfg = cfg or self.config
        order = sorted(state_id for state_id in self.graph if state_id != INVALID_ID)
        children: Dict[StateId, List[GraphEdge]] = {
            state_id: [edge for edge in self.out_edges(state_id) if edge.sink != INVALID_ID]
            for state_id in order
        }

        sweeps_run = 0
        mean_delta = 0.0
        for _ in range(cfg.max_sweeps):
            sweeps_run += 1
            total_delta = 0.0
            for state_id in order:
                node = self.node(state_id)
                before = node.value
                for edge in children[state_id]:
                    target = self.node(edge.sink).value
                    node.value += cfg.alpha * (edge.reward + cfg.gamma * target - node.value)
                total_delta += abs(node.value - before)
            mean_delta = total_delta / len(order) if order else 0.0
            if mean_delta < cfg.convergence_eps:
                break

        logger.debug(f"Value sweep finished after {sweeps_run} sweeps, mean |dV| = {mean_delta:.3g}")
        return SweepReport(sweeps_run=sweeps_run, final_mean_abs_delta=mean_delta)

    def refresh_augmented_values(self, cfg: Optional[ValueConfig] = None) -> None:
        cfg = cfg or self.config
        for node in self.nodes():
            bonus = exploration_bonus(cfg.exploration_constant, self.parent_visits(node.id), node.visits)
            node.set_derived(
                augmented_value=node.value + bonus,
                k_factor=k_factor(node.action_capacity, len(node.actions_tried), cfg.n_exponent),
            )

    def update(self, records: Iterable[StepRecord], cfg: Optional[ValueConfig] = None) -> SweepReport:
        """Fold an x_AS trace into the graph and relearn values"""
        for record in records:
            self.upsert_transition(record)
        report = self.value_sweep(cfg)
        self.refresh_augmented_values(cfg)
        return report

    def top_states(self, k: int) -> List[StateNode]:
        ranked = sorted(self.data_nodes(), key=lambda node: (-node.augmented_value, node.id))
        return ranked[:k]
