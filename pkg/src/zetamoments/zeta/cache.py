"""Resumable JSON-lines cache of completed zero-sum computations."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

__all__ = ["ResultCache", "cache_key", "to_jsonable", "from_jsonable"]


def to_jsonable(value: Any) -> Any:
    """Complex numbers become {"re", "im"}; tuples become lists."""
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "item"):
        return to_jsonable(value.item())
    return value


def from_jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        if set(value) == {"re", "im"}:
            return complex(value["re"], value["im"])
        return {k: from_jsonable(v) for k, v in value.items()}
    if isinstance(value, list):
        return [from_jsonable(v) for v in value]
    return value


def cache_key(dataset_digest: str, operation: str, params: dict) -> str:
    blob = json.dumps({"dataset": dataset_digest, "op": operation, "params": to_jsonable(params)}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


class ResultCache:
    """Append-only JSON-lines store; the last record for a key wins."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._records: dict[str, dict] = {}
        if self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError:
                    continue  # a torn final line from an interrupted run
                self._records[rec["key"]] = rec

    def get(self, dataset_digest: str, operation: str, params: dict) -> Any | None:
        rec = self._records.get(cache_key(dataset_digest, operation, params))
        return None if rec is None else from_jsonable(rec["outputs"])

    def put(self, dataset_digest: str, operation: str, params: dict, outputs: Any) -> None:
        key = cache_key(dataset_digest, operation, params)
        rec = {"key": key, "op": operation, "dataset": dataset_digest, "params": to_jsonable(params), "outputs": to_jsonable(outputs)}
        self.path.parent.mkdir(parents=True, exist_ok=True)
        torn = False
        if self.path.exists() and self.path.stat().st_size:
            with self.path.open("rb") as fh:
                fh.seek(-1, 2)
                torn = fh.read(1) != b"\n"
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(("\n" if torn else "") + json.dumps(rec) + "\n")
        self._records[key] = rec

    def __len__(self) -> int:
        return len(self._records)
