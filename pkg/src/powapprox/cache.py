"""Content-addressed on-disk cache with atomic writes.

An entry lives at ``<root>/<h[:2]>/<h>.json`` where ``h`` is the sha256 of
the canonical key.  The file stores the key, the payload and a checksum of
the payload; a mismatch on read counts as a miss.  Writers create a
private temporary file in the target directory and ``os.replace`` it into
place, so concurrent writers of one key leave exactly one intact entry.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

from . import __version__ as ENGINE_VERSION

log = logging.getLogger(__name__)


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def make_key(command: str, alpha, m=None, n=None, precision_bits=None,
             engine_version: str = ENGINE_VERSION, **extra) -> dict:
    key = {"command": command, "alpha": str(alpha), "m": m, "n": n,
           "precision_bits": precision_bits, "engine": engine_version}
    key.update(extra)
    return key


class Cache:
    def __init__(self, root):
        self.root = Path(root)

    def _path(self, key: dict) -> Path:
        h = hashlib.sha256(_canonical(key).encode()).hexdigest()
        return self.root / h[:2] / f"{h}.json"

    def get(self, key: dict):
        path = self._path(key)
        try:
            entry = json.loads(path.read_text())
        except (OSError, ValueError):
            return None
        payload = entry.get("payload")
        if entry.get("key") != key or entry.get("checksum") != _checksum(payload):
            log.warning("discarding corrupt cache entry %s", path)
            return None
        return payload

    def put(self, key: dict, payload) -> Path:
        path = self._path(key)
        path.parent.mkdir(parents=True, exist_ok=True)
        entry = {"key": key, "payload": payload, "checksum": _checksum(payload)}
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(_canonical(entry))
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return path


def _checksum(payload) -> str:
    return hashlib.sha256(_canonical(payload).encode()).hexdigest()


class NullCache:
    def get(self, key):
        return None

    def put(self, key, payload):
        return None


def open_cache(root) -> Cache | NullCache:
    return Cache(root) if root else NullCache()
