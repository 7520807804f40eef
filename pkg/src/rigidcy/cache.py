"""Append-only CSV cache of point counts, one ``model,p,count`` line per record."""

from __future__ import annotations

import fcntl
import logging
import os
import threading
from pathlib import Path

log = logging.getLogger(__name__)

ENV_VAR = "RIGIDCY_CACHE"


class CacheConflict(RuntimeError):
    """Two different counts recorded for the same key."""


def default_path(flag: str | os.PathLike | None = None) -> Path | None:
    if flag:
        return Path(flag)
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else None


class CountCache:
    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self._lock = threading.Lock()
        self.records: dict[tuple[str, int], int] = {}
        self.hits = 0
        self.misses = 0
        self._load()

    def _load(self):
        if not self.path.exists():
            return
        with open(self.path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line:
                    continue
                parts = line.split(",")
                try:
                    model, p, count = parts
                    key, value = (model, int(p)), int(count)
                    if not model:
                        raise ValueError("empty model name")
                except ValueError:
                    log.warning("%s:%d: ignoring malformed cache line %r", self.path, lineno, line)
                    continue
                self._remember(key, value)

    def _remember(self, key, value):
        old = self.records.get(key)
        if old is not None and old != value:
            raise CacheConflict(f"cache has {key[0]},{key[1]} = {old} and {value}")
        self.records[key] = value

    def get(self, model: str, p: int) -> int | None:
        return self.records.get((model, p))

    def put(self, model: str, p: int, count: int) -> tuple[str, int, int]:
        if "," in model or "\n" in model:
            raise ValueError(f"bad model name {model!r}")
        key = (model, int(p))
        with self._lock:
            if key in self.records:
                self._remember(key, int(count))
                return (model, int(p), int(count))
            self._remember(key, int(count))
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fcntl.flock(fh, fcntl.LOCK_EX)
                try:
                    fh.write(f"{model},{int(p)},{int(count)}\n")
                    fh.flush()
                finally:
                    fcntl.flock(fh, fcntl.LOCK_UN)
        return (model, int(p), int(count))

    def lookup(self, model: str, p: int, compute) -> int:
        """Cached value, or compute, store and return it."""
        hit = self.get(model, p)
        if hit is not None:
            self.hits += 1
            return hit
        self.misses += 1
        value = int(compute())
        self.put(model, p, value)
        return value
