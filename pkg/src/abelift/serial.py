"""Canonical JSON serialization and content hashing.

Every artifact this package writes goes through canonical_json so that
re-running a command with the same inputs produces byte-identical files.
Rules: sorted keys, no whitespace beyond a single space after separators,
floats via repr (shortest round-trip), no NaN/Inf.
"""
from __future__ import annotations

import hashlib
import json
from typing import Any

import numpy as np


def _normalize(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return _normalize(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, float) and not np.isfinite(obj):
        raise ValueError("non-finite float in canonical payload")
    if isinstance(obj, frozenset):
        return sorted(_normalize(v) for v in obj)
    return obj


def canonical_json(obj: Any) -> str:
    """Deterministic JSON text for *obj* (sorted keys, stable floats)."""
    return json.dumps(_normalize(obj), sort_keys=True, separators=(",", ":"),
                      allow_nan=False)


def canonical_bytes(obj: Any) -> bytes:
    return canonical_json(obj).encode("utf-8")


def sha256_hex(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode("utf-8")
    return hashlib.sha256(data).hexdigest()


def object_hash(obj: Any) -> str:
    """sha256 of the canonical JSON encoding of *obj*."""
    return sha256_hex(canonical_bytes(obj))


def file_hash(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def dump_json(obj: Any, path: str) -> str:
    """Write canonical JSON to *path*, returning the text written."""
    text = canonical_json(obj)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
        fh.write("\n")
    return text


def load_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
