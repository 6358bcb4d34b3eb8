"""Content-addressed store for exact counts.

Each entry lives at <root>/<h[:2]>/<h>.json with h = sha256(key), and records
the key, the value and a digest over both.  An entry whose digest or key does
not match is recomputed and rewritten with a warning.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

log = logging.getLogger(__name__)


def _digest(key: str, value) -> str:
    payload = json.dumps({"key": key, "value": value}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


def key_hash(key: str) -> str:
    return hashlib.sha256(key.encode()).hexdigest()


@dataclass
class CountCache:
    root: Path | None
    enabled: bool = True
    hits: int = 0
    misses: int = 0
    corrupt: int = 0
    _memo: dict = field(default_factory=dict, repr=False)

    def path(self, key: str) -> Path:
        h = key_hash(key)
        return self.root / h[:2] / f"{h}.json"

    def get_or_compute(self, key: str, compute):
        if key in self._memo:
            return self._memo[key]
        if not self.enabled or self.root is None:
            value = compute()
            self._memo[key] = value
            return value
        path = self.path(key)
        value = self._read(path, key)
        if value is None:
            self.misses += 1
            value = compute()
            self._write(path, key, value)
        else:
            self.hits += 1
        self._memo[key] = value
        return value

    def _read(self, path: Path, key: str):
        if not path.exists():
            return None
        try:
            entry = json.loads(path.read_text())
            if entry["key"] == key and entry["digest"] == _digest(key, entry["value"]):
                return entry["value"]
        except (ValueError, KeyError, TypeError):
            pass
        self.corrupt += 1
        log.warning("cache entry %s is corrupt; recomputing", path.name)
        return None

    def _write(self, path: Path, key: str, value) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        entry = {"key": key, "value": value, "digest": _digest(key, value)}
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(entry, fh, sort_keys=True)
        os.replace(tmp, path)


def inspect(root: Path) -> dict:
    """Entry count, total size and the number of entries failing their digest."""
    entries = size = bad = 0
    for path in sorted(Path(root).glob("*/*.json")):
        entries += 1
        size += path.stat().st_size
        try:
            entry = json.loads(path.read_text())
            if entry["digest"] != _digest(entry["key"], entry["value"]) or path.stem != key_hash(entry["key"]):
                bad += 1
        except (ValueError, KeyError, TypeError):
            bad += 1
    return {"entries": entries, "bytes": size, "corrupt": bad}


def clear(root: Path) -> int:
    removed = 0
    for path in Path(root).glob("*/*.json"):
        path.unlink()
        removed += 1
    for d in Path(root).glob("*"):
        if d.is_dir() and not any(d.iterdir()):
            d.rmdir()
    return removed
