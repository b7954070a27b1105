"""On-disk cache of expensive exact Hecke data.

Entries are JSON files carrying a format version and a sha256 checksum of
the canonicalized payload. Writes go to a temporary file first and are
renamed into place, so a reader never sees a half-written entry. A version
bump invalidates old entries instead of migrating them; corrupt entries
are logged and recomputed, never fatal.
"""

import hashlib
import json
import logging
import os
import tempfile

from . import modsym
from .errors import CacheCorrupt

CACHE_VERSION = 1

log = logging.getLogger("mtlab.cache")


def _canonical(payload):
    """Deterministic serialization used both for storage and checksums."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


class Cache:
    """A directory of checksummed JSON entries keyed by tuples of scalars.

    hits and misses count load outcomes; keys_used records every key that
    was consulted, for embedding into reports.
    """

    def __init__(self, directory):
        self.directory = directory
        self.hits = 0
        self.misses = 0
        self.keys_used = []

    def path(self, key):
        name = "-".join(str(part) for part in key) + ".json"
        return os.path.join(self.directory, name)

    def store(self, key, payload):
        os.makedirs(self.directory, exist_ok=True)
        body = _canonical(payload)
        entry = {
            "version": CACHE_VERSION,
            "checksum": hashlib.sha256(body.encode("ascii")).hexdigest(),
            "payload": payload,
        }
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(entry, fh, sort_keys=True)
            os.replace(tmp, self.path(key))
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)

    def load(self, key):
        """The stored payload, or None on a miss or a corrupt entry."""
        self.keys_used.append(list(key))
        path = self.path(key)
        try:
            with open(path) as fh:
                entry = json.load(fh)
        except FileNotFoundError:
            self.misses += 1
            return None
        except (OSError, ValueError) as exc:
            log.warning("unreadable cache entry %s: %s", path, exc)
            self.misses += 1
            return None
        try:
            if entry.get("version") != CACHE_VERSION:
                raise CacheCorrupt("version %r, expected %d"
                                   % (entry.get("version"), CACHE_VERSION))
            body = _canonical(entry["payload"])
            digest = hashlib.sha256(body.encode("ascii")).hexdigest()
            if digest != entry.get("checksum"):
                raise CacheCorrupt("checksum mismatch")
        except (CacheCorrupt, KeyError, TypeError) as exc:
            log.warning("corrupt cache entry %s: %s", path, exc)
            self.misses += 1
            return None
        self.hits += 1
        return entry["payload"]


def attach(cache, space):
    """Route a symbol space's Hecke matrices through the cache.

    Matrices already computed in this process stay in the in-memory cache;
    otherwise the disk is consulted before falling back to the (expensive)
    column-by-column computation, whose result is stored for next time.
    """
    orig = space.hecke_matrix

    def hecke_matrix(op):
        cached = space._matrix_cache.get(op)
        if cached is not None:
            return cached
        key = (space.M, space.k, op)
        data = cache.load(key)
        if data is not None:
            mat = modsym.matrix_from_json(data)
            space._matrix_cache[op] = mat
            return mat
        mat = orig(op)
        cache.store(key, modsym.matrix_to_json(space.M, space.k, op, mat))
        return mat

    space.hecke_matrix = hecke_matrix
    return space
