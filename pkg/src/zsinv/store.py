"""Persistent result store: content-addressed cache of exact search results.

One JSON record per file under <root>/<hh>/<hash>.json, keyed by the
canonical group, the length set, and the engine version, so long sweeps can
resume and results from incompatible engine revisions never collide.  Writes
are atomic (temp file + rename); concurrent writers of the same key agree on
the value because results are deterministic.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

from .groups import GroupSpec
from .sequences import LengthSet

ENGINE_VERSION = "1"
CACHE_ENV_VAR = "ZSINV_CACHE_DIR"


def default_cache_dir() -> Path | None:
    env = os.environ.get(CACHE_ENV_VAR)
    return Path(env) if env else None


class ResultStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, group: GroupSpec, ls: LengthSet) -> Path:
        key = json.dumps(
            {"group": group.to_text(), "L": ls.to_text(), "engine": ENGINE_VERSION},
            sort_keys=True,
        )
        digest = hashlib.sha256(key.encode()).hexdigest()
        return self.root / digest[:2] / f"{digest}.json"

    def get(self, group: GroupSpec, ls: LengthSet) -> dict | None:
        path = self._path(group, ls)
        if not path.exists():
            return None
        try:
            return json.loads(path.read_text())
        except (OSError, json.JSONDecodeError):
            return None

    def put(self, group: GroupSpec, ls: LengthSet, record: dict) -> None:
        path = self._path(group, ls)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(record, fh, sort_keys=True)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
