# app/services/oracle/base_oracle.py

import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Optional

from app.services.agents.prompts import prompt_kind
from app.utils.file_handler import FileHandler

logger = logging.getLogger(__name__)


class OracleClient(ABC):
    """Chat-completion boundary. Every call and its response is logged and,
    when a run log is configured, appended to it as one JSON record."""

    model_name = "unknown"

    def __init__(self, run_log_path: Optional[Path] = None):
        self.run_log_path = run_log_path
        self.call_count = 0

    @abstractmethod
    def _complete(self, system: str, user: str) -> str:
        pass

    def complete(self, system: str, user: str, attempt: int = 1) -> str:
        """`attempt` is the caller's 1-based try for this prompt; format retries re-ask with a higher one"""
        self.call_count += 1
        kind = prompt_kind(system).value
        logger.debug(f"Oracle request #{self.call_count} ({kind}, attempt {attempt}):\n{user}")
        record = {"kind": kind, "model": self.model_name, "system": system, "user": user, "attempt": attempt}
        try:
            response = self._complete(system, user)
        except Exception as e:
            logger.error(f"Oracle call #{self.call_count} failed: {str(e)}")
            self._append_run_log({**record, "response": None, "error": str(e)})
            raise
        logger.info(f"Oracle call #{self.call_count} ({kind}) returned {len(response)} chars")
        logger.debug(f"Oracle response #{self.call_count}: {response}")
        self._append_run_log({**record, "response": response, "error": None})
        return response

    def _append_run_log(self, record: dict) -> None:
        if self.run_log_path is not None:
            FileHandler.append_jsonl(self.run_log_path, record)
