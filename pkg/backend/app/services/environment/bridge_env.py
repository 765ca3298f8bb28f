# app/services/environment/bridge_env.py

import json
import logging
import select
import subprocess
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from app.exceptions import BridgeProtocolError, ExecutionError
from app.schemas.trace import EnvDescription, EnvStep
from app.services.environment.base_env import EnvAdapter

logger = logging.getLogger(__name__)


class BridgeEnv(EnvAdapter):
    """Environment living in another process, spoken to one JSON line at a time.

    Request:  {"op": "reset" | "step" | "look" | "describe" | "accessible_objects"
                     | "action_templates" | "inventory", "action": "..."}
    Response: {"ok": true, "result": ...} or {"ok": false, "error": "..."}
    """

    def __init__(self, command: List[str], timeout: float = 30.0):
        self.command = command
        self.timeout = timeout
        self._process: Optional[subprocess.Popen] = None

    def _ensure_started(self) -> subprocess.Popen:
        if self._process is None or self._process.poll() is not None:
            logger.info(f"Starting environment bridge: {' '.join(self.command)}")
            try:
                self._process = subprocess.Popen(
                    self.command,
                    stdin=subprocess.PIPE,
                    stdout=subprocess.PIPE,
                    text=True,
                    bufsize=1,
                )
            except OSError as e:
                raise ExecutionError(f"Could not start environment bridge: {str(e)}") from e
        return self._process

    def _request(self, op: str, action: Optional[str] = None) -> Any:
        process = self._ensure_started()
        payload: Dict[str, Any] = {"op": op}
        if action is not None:
            payload["action"] = action
        try:
            process.stdin.write(json.dumps(payload) + "\n")
            process.stdin.flush()
            ready, _, _ = select.select([process.stdout], [], [], self.timeout)
            if not ready:
                raise ExecutionError(f"Environment bridge timed out after {self.timeout}s on {op!r}")
            line = process.stdout.readline()
        except (OSError, ValueError) as e:
            raise ExecutionError(f"Environment bridge I/O failed on {op!r}: {str(e)}") from e

        if not line:
            raise ExecutionError(f"Environment bridge closed the connection on {op!r}")
        try:
            response = json.loads(line)
        except json.JSONDecodeError as e:
            raise BridgeProtocolError(f"Bridge sent malformed JSON for {op!r}: {line.strip()!r}") from e
        if not isinstance(response, dict) or "ok" not in response:
            raise BridgeProtocolError(f"Bridge response for {op!r} lacks 'ok': {line.strip()!r}")
        if not response["ok"]:
            raise ExecutionError(f"Bridge reported an error on {op!r}: {response.get('error', 'unknown')}")
        logger.debug(f"Bridge {op} -> {response.get('result')!r}")
        return response.get("result")

    def _text(self, op: str) -> str:
        result = self._request(op)
        if not isinstance(result, str):
            raise BridgeProtocolError(f"Bridge returned non-text for {op!r}")
        return result

    def _texts(self, op: str) -> List[str]:
        result = self._request(op)
        if not isinstance(result, list) or not all(isinstance(item, str) for item in result):
            raise BridgeProtocolError(f"Bridge returned a non-list for {op!r}")
        return result

    def reset(self) -> str:
        return self._text("reset")

    def step(self, action: str) -> EnvStep:
        try:
            return EnvStep.model_validate(self._request("step", action))
        except ValidationError as e:
            raise BridgeProtocolError(f"Bridge step result is malformed: {str(e)}") from e

    def look(self) -> str:
        return self._text("look")

    def describe(self) -> EnvDescription:
        try:
            return EnvDescription.model_validate(self._request("describe"))
        except ValidationError as e:
            raise BridgeProtocolError(f"Bridge describe result is malformed: {str(e)}") from e

    def accessible_objects(self) -> List[str]:
        return self._texts("accessible_objects")

    def action_templates(self) -> List[str]:
        return self._texts("action_templates")

    def inventory(self) -> str:
        return self._text("inventory")

    def close(self) -> None:
        if self._process is not None and self._process.poll() is None:
            self._process.stdin.close()
            try:
                self._process.wait(timeout=self.timeout)
            except subprocess.TimeoutExpired:
                self._process.kill()
        self._process = None
