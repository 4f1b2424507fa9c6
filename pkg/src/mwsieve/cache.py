"""On-disk store for per-prime LocalData, keyed by the model's content hash."""

from __future__ import annotations

import json
import logging
import os
import tempfile
from pathlib import Path

from .model import CurveModelData
from .sieve import LocalData

log = logging.getLogger(__name__)

ENV_VAR = "MWSIEVE_CACHE_DIR"


class DiskStore:
    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)

    @classmethod
    def from_env(cls, override: str | None = None) -> "DiskStore | None":
        path = override or os.environ.get(ENV_VAR)
        return cls(path) if path else None

    def path_for(self, model: CurveModelData, ell: int) -> Path:
        return self.directory / f"X0_{model.N}_ell{ell}_{model.content_hash[:16]}.json"

    def save(self, model: CurveModelData, local: LocalData) -> Path | None:
        path = self.path_for(model, local.ell)
        payload = {"model_hash": model.content_hash, "N": model.N, "local_data": local.to_json()}
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, separators=(",", ":"))
            os.replace(tmp, path)
        except OSError as exc:
            log.warning("could not write cache entry %s: %s", path, exc)
            return None
        return path

    def load(self, model: CurveModelData, ell: int) -> LocalData | None:
        path = self.path_for(model, ell)
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
            if payload.get("model_hash") != model.content_hash:
                return None
            local = LocalData.from_json(payload["local_data"])
        except FileNotFoundError:
            return None
        except (OSError, ValueError, KeyError, TypeError) as exc:
            log.warning("ignoring unreadable cache entry %s: %s", path, exc)
            return None
        return local if local.ell == ell else None


def cache_roundtrip(model: CurveModelData, local: LocalData, directory: str | os.PathLike) -> LocalData | None:
    store = DiskStore(directory)
    store.save(model, local)
    return store.load(model, local.ell)
