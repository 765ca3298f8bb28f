# app/schemas/settings.py

from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.enums import EnvironmentKind, OracleKind
from app.schemas.graph import ValueConfig
from app.schemas.run import EpisodeConfig


class EnvironmentSettings(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: EnvironmentKind = EnvironmentKind.TOY
    bridge_command: List[str] = Field(default_factory=list)
    bridge_timeout: float = Field(30.0, gt=0)

    @model_validator(mode="after")
    def _bridge_needs_command(self) -> "EnvironmentSettings":
        if self.kind == EnvironmentKind.BRIDGE and not self.bridge_command:
            raise ValueError("ENVIRONMENT.BRIDGE_COMMAND is required for a bridge environment")
        return self


class OracleSettings(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: OracleKind = OracleKind.MOCK
    script_path: Optional[Path] = None
    endpoint: str = "https://api.openai.com/v1/chat/completions"
    model: str = "gpt-4-turbo"
    temperature: float = Field(0.0, ge=0, le=2)
    max_tokens: int = Field(800, ge=1)
    max_retries: int = Field(2, ge=0)
    transport_retries: int = Field(3, ge=1)
    timeout: float = Field(60.0, gt=0)
    api_key_env: str = "OPENAI_API_KEY"


class PathSettings(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    graph_file: Path = Path("state_graph.json")
    learnings_file: Path = Path("learnings.json")
    report_file: Path = Path("run_report.json")
    log_dir: Path = Path("logs")


class RunSettings(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    seed: int = 0


class LoggingSettings(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    level: str = "INFO"
    format: str = "%(asctime)s - %(levelname)s - %(message)s"


class RunConfig(BaseModel):
    """Fully validated configuration of one planning session"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    environment: EnvironmentSettings = Field(default_factory=EnvironmentSettings)
    oracle: OracleSettings = Field(default_factory=OracleSettings)
    value: ValueConfig = Field(default_factory=ValueConfig)
    episode: EpisodeConfig = Field(default_factory=EpisodeConfig)
    paths: PathSettings = Field(default_factory=PathSettings)
    run: RunSettings = Field(default_factory=RunSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)
