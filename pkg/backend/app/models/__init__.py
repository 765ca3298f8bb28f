# backend/app/models/__init__.py

from app.models.enums import EnvironmentKind, KFactorSource, OracleKind, PromptKind, StopReason

__all__ = ["EnvironmentKind", "KFactorSource", "OracleKind", "PromptKind", "StopReason"]
