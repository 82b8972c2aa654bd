"""Content-addressed on-disk cache of serialized DT tables."""

from __future__ import annotations

import hashlib
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .io import serialize_quiver
from .quiver import Quiver


def cache_key(Q: Quiver, D: int, q_ceiling: int | None) -> str:
    prec = "auto" if q_ceiling is None else str(q_ceiling)
    blob = "\n".join([serialize_quiver(Q), str(D), prec, __version__])
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class CacheEntry:
    key: str
    value: str


class ResultCache:
    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)

    def path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, key: str) -> CacheEntry | None:
        p = self.path(key)
        if not p.exists():
            return None
        return CacheEntry(key, p.read_text(encoding="utf-8"))

    def put(self, entry: CacheEntry) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(entry.value)
            os.replace(tmp, self.path(entry.key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
