"""Content-addressed result cache.

Each entry is one file named by the SHA-256 of its key; the key covers the
graph spec, field order, operation, and a digest of the package source, so
editing the code invalidates every entry.  ``manifest.json`` maps digests to
the readable key.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from functools import lru_cache
from pathlib import Path

log = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def code_version() -> str:
    h = hashlib.sha256()
    pkg = Path(__file__).resolve().parent
    for path in sorted(pkg.glob("*.py")):
        h.update(path.name.encode())
        h.update(path.read_bytes())
    return h.hexdigest()[:16]


class ResultCache:
    def __init__(self, directory: str | os.PathLike | None):
        self.dir = Path(directory) if directory else None
        if self.dir is not None:
            self.dir.mkdir(parents=True, exist_ok=True)

    @property
    def enabled(self) -> bool:
        return self.dir is not None

    @staticmethod
    def key(**parts) -> dict:
        return {**parts, "code_version": code_version()}

    @staticmethod
    def digest(key: dict) -> str:
        return hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()

    def _manifest_path(self) -> Path:
        return self.dir / "manifest.json"

    def _manifest(self) -> dict:
        try:
            return json.loads(self._manifest_path().read_text())
        except (FileNotFoundError, json.JSONDecodeError):
            return {}

    def get(self, key: dict) -> str | None:
        if not self.enabled:
            return None
        d = self.digest(key)
        path = self.dir / d
        if not path.exists():
            return None
        data = path.read_bytes()
        entry = self._manifest().get(d)
        if entry is None or entry.get("sha256") != hashlib.sha256(data).hexdigest():
            log.warning("discarding corrupt cache entry %s", d)
            path.unlink(missing_ok=True)
            return None
        return data.decode()

    def put(self, key: dict, payload: str) -> None:
        if not self.enabled:
            return
        d = self.digest(key)
        data = payload.encode()
        tmp = self.dir / f".{d}.tmp"
        tmp.write_bytes(data)
        tmp.replace(self.dir / d)
        manifest = self._manifest()
        manifest[d] = {"key": key, "sha256": hashlib.sha256(data).hexdigest(), "bytes": len(data)}
        mtmp = self.dir / ".manifest.tmp"
        mtmp.write_text(json.dumps(manifest, sort_keys=True, indent=1))
        mtmp.replace(self._manifest_path())

    def fetch(self, key: dict, compute) -> str:
        """Cached payload for key, computing and storing it on a miss."""
        hit = self.get(key)
        if hit is not None:
            return hit
        payload = compute()
        self.put(key, payload)
        return payload
