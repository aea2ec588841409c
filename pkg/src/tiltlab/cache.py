"""On-disk JSON cache.

Standard modules are keyed by (ell, kind, n); minimal-complex label tables
are content-addressed by the SHA-256 of the module's canonical serialization.
Corrupt entries are rebuilt with a warning, never trusted.
"""

from __future__ import annotations

import json
import os
import sys

from tiltlab.serialize import canonical_dumps, module_from_json, module_to_json

ENV_VAR = "TILTLAB_CACHE"
DEFAULT_DIR = ".tiltlab_cache"


def resolve_cache_dir(explicit: str | None = None) -> str:
    if explicit:
        return explicit
    return os.environ.get(ENV_VAR, DEFAULT_DIR)


class CacheDir:
    def __init__(self, path: str | None = None):
        self.path = resolve_cache_dir(path)

    def _ensure(self):
        os.makedirs(self.path, exist_ok=True)

    def _read(self, name):
        fp = os.path.join(self.path, name)
        if not os.path.exists(fp):
            return None
        try:
            with open(fp) as fh:
                return json.load(fh)
        except (json.JSONDecodeError, OSError) as exc:
            print(f"warning: cache entry {name} unreadable ({exc}); rebuilding", file=sys.stderr)
            return None

    def _write(self, name, obj):
        self._ensure()
        fp = os.path.join(self.path, name)
        tmp = fp + ".tmp"
        with open(tmp, "w") as fh:
            fh.write(canonical_dumps(obj))
        os.replace(tmp, fp)

    # -- standard modules -------------------------------------------------

    def module_key(self, ell, kind, n):
        return f"module_{ell}_{kind}_{n}.json"

    def load_module(self, ell, kind, n):
        data = self._read(self.module_key(ell, kind, n))
        if data is None:
            return None
        try:
            return module_from_json(data["module"])
        except (KeyError, ValueError) as exc:
            print(f"warning: cache module {kind}({n}) invalid ({exc}); rebuilding", file=sys.stderr)
            return None

    def store_module(self, ell, kind, n, module, extra=None):
        obj = {"ell": ell, "kind": kind, "n": n, "module": module_to_json(module)}
        if extra:
            obj.update(extra)
        self._write(self.module_key(ell, kind, n), obj)

    # -- minimal complex label tables -------------------------------------

    def cmin_key(self, fingerprint):
        return f"cmin_{fingerprint}.json"

    def load_cmin_labels(self, fingerprint):
        data = self._read(self.cmin_key(fingerprint))
        if data is None:
            return None
        table = data.get("degrees")
        if not isinstance(table, dict):
            print("warning: corrupt cmin cache entry; rebuilding", file=sys.stderr)
            return None
        try:
            return {int(k): sorted(int(x) for x in v) for k, v in table.items()}
        except (TypeError, ValueError):
            print("warning: corrupt cmin cache entry; rebuilding", file=sys.stderr)
            return None

    def store_cmin_labels(self, fingerprint, table):
        self._write(
            self.cmin_key(fingerprint),
            {"degrees": {str(k): list(v) for k, v in table.items()}},
        )


def cmin_label_table_cached(cache: CacheDir | None, M):
    """Label table of C_min(M), consulting the disk cache when available."""
    from tiltlab.minimal import minimal_tilting_complex

    if cache is None:
        return minimal_tilting_complex(M).label_table()
    fp = M.fingerprint()
    hit = cache.load_cmin_labels(fp)
    if hit is not None:
        return hit
    table = minimal_tilting_complex(M).label_table()
    cache.store_cmin_labels(fp, table)
    return table


def cached_standard_module(cache: CacheDir | None, field, kind: str, n: int):
    """Standard-family constructor backed by the disk cache.

    Stores the canonical JSON of the module under (ell, kind, n); tilting
    modules also record their Delta-filtration multiset.
    """
    from tiltlab.standard import peel_standard_filtration
    from tiltlab.suites import build_module

    if cache is None:
        return build_module(field, kind, n)
    hit = cache.load_module(field.ell, kind, n)
    if hit is not None:
        return hit
    module = build_module(field, kind, n)
    extra = None
    if kind == "T":
        extra = {"delta_filtration": peel_standard_filtration(module, "delta")}
    cache.store_module(field.ell, kind, n, module, extra)
    return module


_active_cache: CacheDir | None = None


def set_active_cache(cache: CacheDir | None):
    """Install a process-wide disk cache used by membership tests and suites."""
    global _active_cache
    _active_cache = cache


def active_cache() -> CacheDir | None:
    return _active_cache


def active_cmin_labels(M):
    return cmin_label_table_cached(_active_cache, M)
