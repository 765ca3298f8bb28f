# app/main.py

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from colorama import Fore, Style, init
from pydantic import ValidationError

from app.config import configure_logging, load_run_config
from app.exceptions import ConfigurationError, PlannerError, SessionLockedError
from app.models.enums import EnvironmentKind, OracleKind
from app.schemas.oracle import Learnings
from app.schemas.run import RunReport
from app.schemas.settings import EnvironmentSettings, OracleSettings, RunConfig
from app.services.agents.planner_agent import PlannerAgent
from app.services.environment.base_env import EnvAdapter
from app.services.environment.bridge_env import BridgeEnv
from app.services.environment.toy_world import toy_world
from app.services.gpt_service import GPTService
from app.services.graph.graph_store import load_graph, save_graph
from app.services.graph.state_graph import StateGraph
from app.services.oracle.base_oracle import OracleClient
from app.services.oracle.mock_oracle import ScriptedOracle
from app.utils.file_handler import FileHandler
from app.utils.json_handler import JSONHandler

logger = logging.getLogger(__name__)

init(autoreset=True)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_LOCKED = 3

ORACLE_LOG_FILE = "oracle_calls.jsonl"
TRACE_LOG_FILE = "trace.jsonl"


def format_message(message: str, color: str) -> str:
    return f"{color}{message}{Style.RESET_ALL}"


def success_message(message: str) -> str:
    return format_message(message, Fore.GREEN)


def warning_message(message: str) -> str:
    return format_message(message, Fore.YELLOW)


def error_message(message: str) -> str:
    return format_message(message, Fore.RED)


# ---- wiring -------------------------------------------------------------


def build_environment(settings: EnvironmentSettings) -> EnvAdapter:
    if settings.kind == EnvironmentKind.BRIDGE:
        return BridgeEnv(settings.bridge_command, timeout=settings.bridge_timeout)
    return toy_world()


def build_oracle(settings: OracleSettings, run_log_path: Optional[Path] = None) -> OracleClient:
    if settings.kind == OracleKind.LIVE:
        return GPTService(settings, run_log_path=run_log_path)
    if settings.script_path is None:
        logger.warning("Mock oracle without a script; every plan will be empty")
        return ScriptedOracle(run_log_path=run_log_path)
    return ScriptedOracle.from_script(settings.script_path, run_log_path=run_log_path)


def load_learnings(path: Path) -> Learnings:
    if not path.exists():
        return Learnings()
    lines = JSONHandler.extract_string_list(path.read_text(encoding="utf-8"))
    if lines is None:
        raise ConfigurationError(f"Learnings file {path} is not a list of quoted strings")
    return Learnings.from_lines(lines)


def save_learnings(learnings: Learnings, path: Path) -> None:
    FileHandler.atomic_write_text(path, JSONHandler.dump_string_list(learnings.axioms) + "\n")


def save_report(report: RunReport, path: Path) -> None:
    FileHandler.atomic_write_text(path, report.model_dump_json(indent=2) + "\n")


def load_report(path: Path) -> RunReport:
    try:
        return RunReport.model_validate_json(path.read_bytes())
    except OSError as e:
        raise ConfigurationError(f"Cannot read report {path}: {str(e)}") from e
    except ValidationError as e:
        raise ConfigurationError(f"Malformed report {path}:\n{e}") from e


# ---- text summaries -------------------------------------------------------


def _first_line(text: str, width: int = 60) -> str:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    line = lines[1] if len(lines) > 1 else (lines[0] if lines else "")
    return line if len(line) <= width else line[: width - 3] + "..."


def graph_summary(graph: StateGraph, top: int = 5) -> str:
    rows = [
        f"states: {len(graph.data_nodes())}",
        f"edges: {graph.edge_count}",
        f"invalid edges: {graph.invalid_edge_count}",
    ]
    ranked = graph.top_states(top)
    if ranked:
        rows.append("")
        rows.append(f"{'rank':<5} {'state':<14} {'V':>9} {'V+':>9} {'visits':>6}  description")
        for rank, node in enumerate(ranked, start=1):
            rows.append(
                f"{rank:<5} {node.id[:12]:<14} {node.value:>9.4f} {node.augmented_value:>9.4f} "
                f"{node.visits:>6}  {_first_line(node.description)}"
            )
    return "\n".join(rows)


def reward_series(report: RunReport) -> str:
    rows = ["episode\traw_reward\tlog_reward\tinteractions\tdone"]
    for episode in report.episodes:
        rows.append(
            f"{episode.index}\t{episode.cumulative_raw_reward:g}\t{episode.cumulative_transformed_reward:.6f}"
            f"\t{episode.interactions}\t{str(episode.done).lower()}"
        )
    return "\n".join(rows)


def replay_table(records: Sequence[Dict[str, Any]]) -> str:
    rows = [f"{'ep':>3} {'rnd':>3} {'step':>4}  {'reward':>7}  {'valid':<5}  {'state':<12}  action"]
    for record in records:
        rows.append(
            f"{record['episode']:>3} {record['round']:>3} {record['step']:>4}  {record['raw_reward']:>7g}  "
            f"{str(record['valid']).lower():<5}  {record['state_id'][:12]:<12}  {record['action']}"
        )
    return "\n".join(rows)


# ---- commands -------------------------------------------------------------


def cmd_run(config_path: str) -> int:
    try:
        config: RunConfig = load_run_config(config_path)
    except ConfigurationError as e:
        print(error_message(f"Configuration error: {str(e)}"))
        return EXIT_CONFIG
    configure_logging(config.logging)
    paths = config.paths

    try:
        lock = FileHandler.session_lock(paths.graph_file)
    except SessionLockedError as e:
        print(error_message(str(e)))
        return EXIT_LOCKED

    env: Optional[EnvAdapter] = None
    try:
        graph = load_graph(paths.graph_file, config.value)
        learnings = load_learnings(paths.learnings_file)
        oracle = build_oracle(config.oracle, run_log_path=paths.log_dir / ORACLE_LOG_FILE)
        env = build_environment(config.environment)

        def checkpoint(*_: Any) -> None:
            save_graph(graph, paths.graph_file)
            save_learnings(agent.learnings, paths.learnings_file)

        agent = PlannerAgent(
            graph,
            oracle,
            episode_config=config.episode,
            value_config=config.value,
            learnings=learnings,
            seed=config.run.seed,
            max_retries=config.oracle.max_retries,
            trace_log_path=paths.log_dir / TRACE_LOG_FILE,
            on_round_complete=checkpoint,
            on_episode_complete=checkpoint,
        )
        report = agent.solve(env)
        checkpoint()
        save_report(report, paths.report_file)
    except ConfigurationError as e:
        print(error_message(f"Configuration error: {str(e)}"))
        return EXIT_CONFIG
    except PlannerError as e:
        logger.error(f"Run failed: {str(e)}")
        print(error_message(f"Run failed: {str(e)}"))
        return EXIT_FAILURE
    finally:
        if env is not None:
            env.close()
        lock.release()

    last = report.episodes[-1] if report.episodes else None
    summary = (
        f"episodes: {len(report.episodes)}  interactions: {report.total_interactions}  "
        f"reward: {last.cumulative_raw_reward if last else 0:g}  solved: {str(report.solved).lower()}"
    )
    if report.error:
        print(error_message(report.error))
        print(warning_message(summary))
        return EXIT_FAILURE
    print(success_message(summary) if report.solved else warning_message(summary))
    return EXIT_OK


def cmd_inspect(graph_path: str, top: int = 5, report_path: Optional[str] = None) -> int:
    path = Path(graph_path)
    if not path.is_file():
        print(error_message(f"Graph file not found: {path}"))
        return EXIT_FAILURE
    try:
        graph = load_graph(path)
        print(graph_summary(graph, top))
        if report_path is not None:
            print()
            print(reward_series(load_report(Path(report_path))))
    except PlannerError as e:
        print(error_message(str(e)))
        return EXIT_FAILURE
    return EXIT_OK


def cmd_replay(log_path: str) -> int:
    try:
        records = FileHandler.read_jsonl(log_path)
    except (OSError, json.JSONDecodeError) as e:
        print(error_message(f"Cannot read trace log {log_path}: {str(e)}"))
        return EXIT_FAILURE
    print(replay_table(records))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="planner", description="LLM-guided state-space planner")
    subparsers = parser.add_subparsers(dest="command", required=True)

    run_parser = subparsers.add_parser("run", help="Run or resume a planning session")
    run_parser.add_argument("--config", required=True, help="Run config TOML file")

    inspect_parser = subparsers.add_parser("inspect", help="Summarise a persisted state graph")
    inspect_parser.add_argument("--graph", required=True, help="Graph file")
    inspect_parser.add_argument("--top", type=int, default=5, help="Number of states to rank by augmented value")
    inspect_parser.add_argument("--report", default=None, help="Run report to print the per-episode reward series of")

    replay_parser = subparsers.add_parser("replay", help="Print a recorded step trace")
    replay_parser.add_argument("--log", required=True, help="trace.jsonl written by a run")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging()
    try:
        if args.command == "run":
            return cmd_run(args.config)
        if args.command == "inspect":
            return cmd_inspect(args.graph, args.top, args.report)
        return cmd_replay(args.log)
    except Exception as e:
        logger.exception(f"Unexpected error: {str(e)}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
