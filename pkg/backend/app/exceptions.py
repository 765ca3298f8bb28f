# app/exceptions.py

from typing import Any, List, Optional


class PlannerError(Exception):
    """Base class for every error raised by the planner"""


class ConfigurationError(PlannerError):
    pass


class StateLookupError(PlannerError, KeyError):
    def __init__(self, state_id: str):
        super().__init__(f"State {state_id!r} is not in the graph")
        self.state_id = state_id

    def __str__(self) -> str:
        return self.args[0]


class GraphStructureError(PlannerError):
    pass


class GraphParseError(PlannerError):
    def __init__(self, message: str, offset: Optional[int] = None):
        location = f" at byte {offset}" if offset is not None else ""
        super().__init__(f"Malformed graph file{location}: {message}")
        self.offset = offset


class GraphVersionError(PlannerError):
    def __init__(self, found: Any, expected: int):
        super().__init__(f"Unsupported graph file version {found!r} (expected {expected})")
        self.found = found
        self.expected = expected


class ExecutionError(PlannerError):
    """Environment adapter failure. Carries the traces recorded before the failure."""

    def __init__(self, message: str, x_ao: Optional[List[Any]] = None, x_as: Optional[List[Any]] = None):
        super().__init__(message)
        self.x_ao = list(x_ao or [])
        self.x_as = list(x_as or [])


class BridgeProtocolError(ExecutionError):
    pass


class OracleError(PlannerError):
    pass


class OracleFormatError(OracleError):
    def __init__(self, message: str, attempts: int):
        super().__init__(message)
        self.attempts = attempts


class SessionLockedError(PlannerError):
    pass
