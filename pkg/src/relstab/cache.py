"""Advisory on-disk cache of Krull-Schmidt decompositions.

Entries are keyed by group fingerprint, field and the module's canonical
key plus a digest of its matrices.  A hit is only used after its iso
witness checks out against the queried module, so a stale or tampered
file can cost time but never correctness.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

import numpy as np

from . import linalg as la
from .decomposition import Decomposition, canonical_key, krull_schmidt
from .modules import GMap, GModule, ModuleError, build_module, direct_sum_module, is_intertwiner, zero_module

log = logging.getLogger(__name__)

ENV_VAR = "RELSTAB_CACHE"
FORMAT_VERSION = 1


def cache_key(m: GModule) -> str:
    digest = hashlib.sha256(m.data_key()).hexdigest()[:16]
    return f"{m.group.fingerprint()}|{m.p}|{canonical_key(m)!r}|{digest}"


def resolve_path(flag: str | None) -> Path | None:
    """The environment variable wins over the command-line flag."""
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path(flag) if flag else None


class DecompCache:
    def __init__(self, path: Path | str | None):
        self.path = Path(path) if path else None
        self.entries: dict[str, dict] = {}
        self.hits = 0
        self.misses = 0
        self.rejected = 0
        self._dirty = False
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self):
        try:
            data = json.loads(self.path.read_text())
            if data.get("version") != FORMAT_VERSION or not isinstance(data.get("entries"), dict):
                raise ValueError("unexpected layout")
            self.entries = data["entries"]
        except (OSError, ValueError, AttributeError) as exc:
            log.warning("ignoring unreadable decomposition cache %s (%s)", self.path, exc)
            self.entries = {}

    def _decode(self, m: GModule, entry: dict) -> Decomposition | None:
        try:
            summands = []
            for s in entry["summands"]:
                mats = [np.array(a, dtype=np.int64) for a in s["action"]]
                summands.append((build_module(m.group, m.p, mats, dim=int(s["dim"])), int(s["mult"])))
            iso = np.array(entry["iso"], dtype=np.int64).reshape(m.dim, m.dim) % m.p
        except (KeyError, TypeError, ValueError, ModuleError, la.LinalgError):
            return None
        mods = [x for x, k in summands for _ in range(k)]
        source = direct_sum_module(*mods) if mods else zero_module(m.group, m.p)
        if source.dim != m.dim or not la.is_invertible(iso, m.p) or not is_intertwiner(source, m, iso):
            return None
        return Decomposition(m, summands, GMap(source, m, iso))

    def get(self, m: GModule) -> Decomposition | None:
        entry = self.entries.get(cache_key(m))
        if entry is None:
            self.misses += 1
            return None
        dec = self._decode(m, entry)
        if dec is None:
            log.warning("decomposition cache entry failed validation; recomputing")
            self.rejected += 1
            return None
        self.hits += 1
        return dec

    def put(self, dec: Decomposition):
        self.entries[cache_key(dec.original)] = {
            "summands": [
                {"dim": x.dim, "mult": k, "action": [a.tolist() for a in x.action]}
                for x, k in dec.summands
            ],
            "iso": dec.iso.matrix.tolist(),
        }
        self._dirty = True

    def decompose(self, m: GModule, seed: int = 1) -> Decomposition:
        dec = self.get(m)
        if dec is None:
            dec = krull_schmidt(m, seed)
            self.put(dec)
        return dec

    def save(self):
        if self.path is None or not self._dirty:
            return
        payload = json.dumps({"version": FORMAT_VERSION, "entries": self.entries}, sort_keys=True)
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        try:
            tmp.write_text(payload)
            tmp.replace(self.path)
        except OSError as exc:
            log.warning("could not write decomposition cache %s (%s)", self.path, exc)
        self._dirty = False
