"""Content-addressed on-disk cache for resolutions and command results.

Each entry is one file ``<sha256>.rcx``: the magic bytes ``RCXC``, a one-byte
format version, then zlib-compressed UTF-8 JSON.  Keys hash the ring and
module signatures together with H and D, so entries never collide across
configurations.  Unreadable files are ignored with a warning and recomputed.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import zlib
from pathlib import Path

MAGIC = b"RCXC"
VERSION = 1

log = logging.getLogger(__name__)


def content_key(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def encode(payload) -> bytes:
    body = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return MAGIC + bytes([VERSION]) + zlib.compress(body, 6)


def decode(blob: bytes):
    if blob[:4] != MAGIC:
        raise ValueError("bad magic")
    if blob[4] != VERSION:
        raise ValueError(f"unsupported cache version {blob[4]}")
    return json.loads(zlib.decompress(blob[5:]).decode())


class DiskCache:
    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def _path(self, key: str) -> Path:
        return self.root / f"{key}.rcx"

    def get_raw(self, key: str):
        path = self._path(key)
        if not path.exists():
            self.misses += 1
            return None
        try:
            value = decode(path.read_bytes())
        except (OSError, ValueError, zlib.error, IndexError) as exc:
            log.warning("ignoring corrupt cache file %s: %s", path.name, exc)
            self.misses += 1
            return None
        self.hits += 1
        return value

    def put_raw(self, key: str, value) -> None:
        path = self._path(key)
        if path.exists():
            return
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        with os.fdopen(fd, "wb") as fh:
            fh.write(encode(value))
        os.replace(tmp, path)

    # -- resolution interface used by resolve.resolution
    @staticmethod
    def resolution_key(M, H: int) -> str:
        return content_key({"kind": "resolution", "module": M.signature(), "H": H,
                            "D": M.ring.max_degree})

    def get(self, M, H: int):
        from ..resolve import Resolution

        data = self.get_raw(self.resolution_key(M, H))
        if data is None:
            return None
        return Resolution.from_json(M.ring, data)

    def put(self, M, H: int, res) -> None:
        self.put_raw(self.resolution_key(M, H), res.to_json())


def cache_get(cache: DiskCache, M, H: int):
    return cache.get(M, H)


def cache_put(cache: DiskCache, M, H: int, res) -> None:
    cache.put(M, H, res)
