# app/services/agents/base_agent.py

import logging
from typing import List

from app.exceptions import OracleFormatError
from app.services.agents.prompts import FORMAT_REMINDER
from app.services.oracle.base_oracle import OracleClient
from app.utils.json_handler import JSONHandler

logger = logging.getLogger(__name__)


class BaseAgent:
    """Base class for the agents that query the oracle"""

    def __init__(self, oracle: OracleClient, max_retries: int = 2):
        self.oracle = oracle
        self.max_retries = max_retries

    def _ask_for_string_list(self, system: str, user: str) -> List[str]:
        """Ask until the answer parses as a list of strings, re-sending with a format reminder"""
        attempts = self.max_retries + 1
        prompt = user
        for attempt in range(1, attempts + 1):
            response = self.oracle.complete(system, prompt, attempt=attempt)
            parsed = JSONHandler.extract_string_list(response)
            if parsed is not None:
                if attempt > 1:
                    logger.info(f"Oracle output parsed on attempt {attempt}")
                return parsed
            logger.warning(f"Oracle output not in list format (attempt {attempt}/{attempts}): {response[:200]!r}")
            prompt = user + FORMAT_REMINDER
        raise OracleFormatError(f"Oracle output unparsable after {attempts} attempts", attempts=attempts)
