"""JSON model containers with embedded binary arrays.

Arrays are stored as base64-encoded little-endian buffers inside plain
JSON objects.  Serialization is canonical (sorted keys, fixed
separators, UTF-8, LF) so that equal inputs produce byte-identical
files on every platform.
"""

from __future__ import annotations

import base64
import json
from pathlib import Path
from typing import Any

import numpy as np

_ARRAY_KEY = "__ndarray__"


def encode_array(arr: np.ndarray) -> dict:
    arr = np.ascontiguousarray(arr)
    little = arr.astype(arr.dtype.newbyteorder("<"), copy=False)
    return {
        _ARRAY_KEY: True,
        "dtype": arr.dtype.str.replace(">", "<").replace("=", "<"),
        "shape": list(arr.shape),
        "data": base64.b64encode(little.tobytes()).decode("ascii"),
    }


def decode_array(obj: dict) -> np.ndarray:
    if not obj.get(_ARRAY_KEY):
        raise ValueError("not an encoded array")
    raw = base64.b64decode(obj["data"])
    arr = np.frombuffer(raw, dtype=np.dtype(obj["dtype"]))
    arr = arr.reshape(obj["shape"])
    return arr.astype(arr.dtype.newbyteorder("="))


def _encode(obj: Any) -> Any:
    if isinstance(obj, np.ndarray):
        return encode_array(obj)
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _decode(obj: Any) -> Any:
    if isinstance(obj, dict):
        if obj.get(_ARRAY_KEY):
            return decode_array(obj)
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    return obj


def dumps_canonical(obj: Any) -> str:
    """Canonical JSON text for obj, arrays included."""
    return json.dumps(_encode(obj), sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False)


def dump_json(obj: Any, path: str | Path) -> None:
    text = dumps_canonical(obj)
    Path(path).write_text(text + "\n", encoding="utf-8", newline="\n")


def load_json(path: str | Path) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    return _decode(json.loads(text))
