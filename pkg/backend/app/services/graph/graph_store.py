# app/services/graph/graph_store.py

import json
import logging
from pathlib import Path
from typing import Optional, Union

from pydantic import ValidationError

from app.exceptions import GraphParseError, GraphVersionError
from app.schemas.graph import GRAPH_FILE_VERSION, INVALID_ID, ROOT_ID, GraphDocument, ValueConfig
from app.services.graph.state_graph import StateGraph
from app.utils.file_handler import FileHandler

logger = logging.getLogger(__name__)


def serialize(graph: StateGraph) -> bytes:
    document = GraphDocument(
        version=GRAPH_FILE_VERSION,
        config_echo=graph.config,
        nodes=graph.nodes(),
        edges=graph.edges(),
        root=ROOT_ID,
        invalid=INVALID_ID,
    )
    return document.model_dump_json(indent=2).encode("utf-8")


def deserialize(data: bytes) -> StateGraph:
    """Rebuild a graph from its file bytes. Nothing is returned unless the whole file is valid."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise GraphParseError(e.reason, offset=e.start) from e

    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise GraphParseError(e.msg, offset=len(text[:e.pos].encode("utf-8"))) from e

    if not isinstance(raw, dict):
        raise GraphParseError("top level must be an object", offset=0)
    if "version" not in raw:
        raise GraphParseError("missing 'version'")
    if raw["version"] != GRAPH_FILE_VERSION:
        raise GraphVersionError(raw["version"], GRAPH_FILE_VERSION)

    try:
        document = GraphDocument.model_validate(raw)
    except ValidationError as e:
        raise GraphParseError(str(e)) from e

    if document.root != ROOT_ID or document.invalid != INVALID_ID:
        raise GraphParseError(f"unexpected root/invalid markers {document.root!r}/{document.invalid!r}")

    graph = StateGraph(document.config_echo)
    graph.graph.clear()
    for node in document.nodes:
        if graph.has_node(node.id):
            raise GraphParseError(f"duplicate node {node.id!r}")
        graph.graph.add_node(node.id, data=node)
    for marker in (ROOT_ID, INVALID_ID):
        if not graph.has_node(marker):
            raise GraphParseError(f"missing {marker} node")
    for edge in document.edges:
        if not graph.has_node(edge.source) or not graph.has_node(edge.sink):
            raise GraphParseError(f"edge {edge.action!r} references an unknown node")
        if edge.source == INVALID_ID:
            raise GraphParseError(f"edge {edge.action!r} leaves the invalid sink")
        if graph.edge(edge.source, edge.action) is not None:
            raise GraphParseError(f"duplicate edge {edge.action!r} from {edge.source!r}")
        graph.graph.add_edge(edge.source, edge.sink, key=edge.action, data=edge)

    graph.refresh_augmented_values()
    return graph


def save_graph(graph: StateGraph, path: Union[str, Path]) -> None:
    FileHandler.atomic_write_bytes(path, serialize(graph))
    logger.debug(f"Saved graph ({len(graph.data_nodes())} states, {graph.edge_count} edges) to {path}")


def load_graph(path: Union[str, Path], config: Optional[ValueConfig] = None) -> StateGraph:
    """Load a persisted graph, or start a fresh one when the file does not exist yet.

    When `config` is given it replaces the echoed config and derived values are refreshed with it.
    """
    target = Path(path)
    if not target.exists():
        logger.info(f"No graph at {target}; starting a fresh state graph")
        return StateGraph(config)
    graph = deserialize(target.read_bytes())
    if config is not None and config != graph.config:
        graph.config = config
        graph.refresh_augmented_values()
    logger.info(f"Loaded graph with {len(graph.data_nodes())} states from {target}")
    return graph
