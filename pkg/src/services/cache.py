"""
Table Cache Service

Advisory on-disk cache of exported character tables, keyed by group
fingerprint and tool version. Reads and writes never raise: any failure is
logged and the caller recomputes.
"""

import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from src.config.settings import EngineConfig, TOOL_VERSION

logger = logging.getLogger(__name__)


class TableCache:
    """In-process memo in front of a directory of JSON table files."""

    def __init__(self, directory: Optional[str] = None, enabled: Optional[bool] = None):
        self._directory = directory
        self._enabled = enabled
        self._memo: Dict[str, dict] = {}
        self._pending: List[Tuple[str, dict]] = []
        self.defer_writes = False

    @property
    def directory(self) -> Path:
        return Path(self._directory or EngineConfig.CACHE_DIR)

    @property
    def enabled(self) -> bool:
        return EngineConfig.CACHE_ENABLED if self._enabled is None else self._enabled

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}-v{TOOL_VERSION}.json"

    # ========== READS ==========

    def load(self, key: str) -> Optional[dict]:
        if key in self._memo:
            return self._memo[key]
        if not self.enabled:
            return None
        path = self._path(key)
        if not path.exists():
            return None
        try:
            with open(path, "r", encoding="utf-8") as f:
                payload = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning(f"[CACHE] ignoring unreadable cache file {path.name}: {e}")
            return None
        self._memo[key] = payload
        logger.debug(f"[CACHE] hit {key}")
        return payload

    # ========== WRITES ==========

    def store(self, key: str, payload: dict) -> None:
        self._memo[key] = payload
        if not self.enabled:
            return
        if self.defer_writes:
            self._pending.append((key, payload))
            return
        self._write(key, payload)

    def _write(self, key: str, payload: dict) -> None:
        path = self._path(key)
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                json.dump(payload, f, sort_keys=True)
            os.replace(tmp, path)
            logger.debug(f"[CACHE] wrote {path.name}")
        except OSError as e:
            logger.warning(f"[CACHE] could not write {path.name}: {e}")

    def drain(self) -> List[Tuple[str, dict]]:
        """Hand pending writes to the single writer and forget them here."""
        pending, self._pending = self._pending, []
        return pending

    def store_payloads(self, items: List[Tuple[str, Any]]) -> None:
        for key, payload in items:
            if not self._path(key).exists():
                self._write(key, payload)
            self._memo.setdefault(key, payload)

    def clear_memo(self) -> None:
        self._memo.clear()


_cache: Optional[TableCache] = None


def get_cache() -> TableCache:
    """Get or create the table cache singleton."""
    global _cache
    if _cache is None:
        _cache = TableCache()
    return _cache
