# app/config.py

import logging
from pathlib import Path
from typing import Any, Union

from dotenv import load_dotenv
from dynaconf import Dynaconf
from pydantic import ValidationError

from app.exceptions import ConfigurationError
from app.schemas.settings import LoggingSettings, RunConfig

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).parents[2]
config_dir = PROJECT_ROOT / "backend" / "config"
DEFAULT_SETTINGS_FILE = config_dir / "settings.toml"

ENVVAR_PREFIX = "PLANNER"


def _lower_keys(data: Any) -> Any:
    if isinstance(data, dict):
        return {str(key).lower(): _lower_keys(value) for key, value in data.items()}
    if isinstance(data, list):
        return [_lower_keys(item) for item in data]
    return data


def _resolve(path: Path, base_dir: Path) -> Path:
    return path if path.is_absolute() else (base_dir / path).resolve()


def load_run_config(config_path: Union[str, Path]) -> RunConfig:
    """Layer a run config file over the defaults and validate the result"""
    path = Path(config_path)
    if not path.is_file():
        raise ConfigurationError(f"Config file not found: {path}")

    load_dotenv()
    try:
        layered = Dynaconf(
            settings_files=[str(DEFAULT_SETTINGS_FILE), str(path)],
            merge_enabled=True,
            envvar_prefix=ENVVAR_PREFIX,
        )
        raw = _lower_keys(layered.as_dict())
    except Exception as e:
        raise ConfigurationError(f"Could not read config {path}: {str(e)}") from e

    try:
        config = RunConfig.model_validate(raw)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid config {path}:\n{e}") from e

    base_dir = path.resolve().parent
    paths = config.paths.model_copy(update={
        "graph_file": _resolve(config.paths.graph_file, base_dir),
        "learnings_file": _resolve(config.paths.learnings_file, base_dir),
        "report_file": _resolve(config.paths.report_file, base_dir),
        "log_dir": _resolve(config.paths.log_dir, base_dir),
    })
    oracle = config.oracle
    if oracle.script_path is not None:
        oracle = oracle.model_copy(update={"script_path": _resolve(oracle.script_path, base_dir)})

    logger.debug(f"Loaded run config from {path}")
    return config.model_copy(update={"paths": paths, "oracle": oracle})


def configure_logging(logging_settings: LoggingSettings = LoggingSettings()) -> None:
    logging.basicConfig(
        level=getattr(logging, logging_settings.level.upper(), logging.INFO),
        format=logging_settings.format,
        force=True,
    )
