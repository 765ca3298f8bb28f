# app/services/agents/learner.py

import logging
from typing import Sequence

from app.exceptions import OracleFormatError
from app.schemas.oracle import Learnings
from app.schemas.trace import ObservationRecord
from app.services.agents.base_agent import BaseAgent
from app.services.agents.prompts import render_learner_prompt
from app.services.oracle.base_oracle import OracleClient

logger = logging.getLogger(__name__)


class Learner(BaseAgent):
    """Distils an episode's trace into belief axioms that replace the previous ones"""

    def update_learnings(
        self,
        trace: Sequence[ObservationRecord],
        feedback: str,
        prior: Learnings,
        objective: str,
    ) -> Learnings:
        if not trace:
            logger.info("Empty trace; keeping previous learnings")
            return prior

        system, user = render_learner_prompt(trace, feedback, prior.axioms, objective)
        try:
            lines = self._ask_for_string_list(system, user)
        except OracleFormatError as e:
            logger.warning(f"Learner output unusable ({str(e)}); keeping previous learnings")
            return prior

        learnings = Learnings.from_lines(lines)
        logger.info(f"Learner produced {len(learnings.axioms)} axioms (previously {len(prior.axioms)})")
        return learnings


def update_learnings(
    trace: Sequence[ObservationRecord],
    feedback: str,
    prior: Learnings,
    objective: str,
    client: OracleClient,
    max_retries: int = 2,
) -> Learnings:
    return Learner(client, max_retries=max_retries).update_learnings(trace, feedback, prior, objective)
