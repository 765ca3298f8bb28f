# app/services/oracle/mock_oracle.py

import json
import logging
from collections import deque
from pathlib import Path
from typing import Deque, Iterable, List, Optional, Sequence, Tuple, Union

from app.exceptions import ConfigurationError
from app.models.enums import PromptKind
from app.services.agents.prompts import prompt_kind
from app.services.oracle.base_oracle import OracleClient
from app.services.planning.plan_selector import AVOID_HEADER

logger = logging.getLogger(__name__)

ScriptEntry = Union[str, List[str]]


def _as_text(entry: ScriptEntry) -> str:
    return entry if isinstance(entry, str) else json.dumps(entry)


class ScriptedOracle(OracleClient):
    """Replays canned responses, one queue per prompt kind.

    List entries are sent as JSON lists; string entries are sent verbatim, which
    is how malformed output is scripted. Exhausted queues fall back to the defaults.
    """

    model_name = "scripted-mock"

    def __init__(
        self,
        plan_responses: Iterable[ScriptEntry] = (),
        learner_responses: Iterable[ScriptEntry] = (),
        default_plan: ScriptEntry = "[]",
        default_learnings: ScriptEntry = "[]",
        run_log_path: Optional[Path] = None,
    ):
        super().__init__(run_log_path)
        self._queues = {
            PromptKind.ACTION_PLAN: deque(_as_text(entry) for entry in plan_responses),
            PromptKind.LEARNER: deque(_as_text(entry) for entry in learner_responses),
        }
        self._defaults = {
            PromptKind.ACTION_PLAN: _as_text(default_plan),
            PromptKind.LEARNER: _as_text(default_learnings),
        }
        self.calls: List[Tuple[PromptKind, str, str]] = []

    @classmethod
    def from_script(cls, path: Path, run_log_path: Optional[Path] = None) -> "ScriptedOracle":
        """Load {"plan_responses": [...], "learner_responses": [...]} from a JSON file"""
        try:
            script = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigurationError(f"Cannot read mock oracle script {path}: {str(e)}") from e
        unknown = set(script) - {"plan_responses", "learner_responses", "default_plan", "default_learnings"}
        if unknown:
            raise ConfigurationError(f"Unknown keys in mock oracle script {path}: {sorted(unknown)}")
        return cls(run_log_path=run_log_path, **script)

    def _complete(self, system: str, user: str) -> str:
        kind = prompt_kind(system)
        self.calls.append((kind, system, user))
        queue: Deque[str] = self._queues[kind]
        return queue.popleft() if queue else self._defaults[kind]

    def prompts(self, kind: PromptKind) -> List[str]:
        return [user for call_kind, _, user in self.calls if call_kind == kind]


def avoided_actions_in(prompt: str) -> List[str]:
    """Actions listed under the STRICTLY AVOID header of a rendered prompt"""
    if AVOID_HEADER not in prompt:
        return []
    tail = prompt.split(AVOID_HEADER, 1)[1]
    return [line.strip() for line in tail.strip().splitlines() if line.strip()]


class ComplianceOracle(OracleClient):
    """Proposes its candidate actions minus whatever the prompt says to avoid"""

    model_name = "compliance-mock"

    def __init__(self, candidates: Sequence[str], run_log_path: Optional[Path] = None):
        super().__init__(run_log_path)
        self.candidates = list(candidates)

    def _complete(self, system: str, user: str) -> str:
        if prompt_kind(system) == PromptKind.LEARNER:
            return "[]"
        avoided = set(avoided_actions_in(user))
        return json.dumps([action for action in self.candidates if action not in avoided])
