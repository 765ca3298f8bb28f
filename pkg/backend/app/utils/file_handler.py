# app/utils/file_handler.py

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Union

from filelock import FileLock, Timeout

from app.exceptions import SessionLockedError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class FileHandler:
    """Atomic writes, append-only logs and the session lock"""

    @staticmethod
    def atomic_write_bytes(path: PathLike, data: bytes) -> None:
        """Write to a temp file beside the target, then rename over it"""
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
        try:
            with os.fdopen(fd, "wb") as out_file:
                out_file.write(data)
                out_file.flush()
                os.fsync(out_file.fileno())
            os.replace(tmp_name, target)
        except BaseException:
            if os.path.exists(tmp_name):
                os.remove(tmp_name)
            raise

    @staticmethod
    def atomic_write_text(path: PathLike, text: str) -> None:
        FileHandler.atomic_write_bytes(path, text.encode("utf-8"))

    @staticmethod
    def append_jsonl(path: PathLike, record: Dict[str, Any]) -> None:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "a", encoding="utf-8") as log_file:
            log_file.write(json.dumps(record, ensure_ascii=False) + "\n")

    @staticmethod
    def read_jsonl(path: PathLike) -> List[Dict[str, Any]]:
        with open(path, "r", encoding="utf-8") as log_file:
            return [json.loads(line) for line in log_file if line.strip()]

    @staticmethod
    def session_lock(graph_path: PathLike, timeout: float = 0) -> FileLock:
        """Acquire the lock guarding a graph file; fails fast if another run holds it"""
        lock_path = f"{graph_path}.lock"
        Path(lock_path).parent.mkdir(parents=True, exist_ok=True)
        lock = FileLock(lock_path, timeout=timeout)
        try:
            lock.acquire()
        except Timeout as e:
            raise SessionLockedError(f"Another planning session holds {lock_path}") from e
        logger.debug(f"Acquired session lock {lock_path}")
        return lock
