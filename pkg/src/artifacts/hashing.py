"""Canonical serialization and content hashes."""

import hashlib
import json
from typing import Any

import numpy as np


def canonical_json(data: Any) -> str:
    """Compact, key-sorted JSON used for hashing."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def sha256_json(data: Any) -> str:
    return hashlib.sha256(canonical_json(data).encode("utf-8")).hexdigest()


def sha256_arrays(*arrays: np.ndarray, prefix: str = "") -> str:
    """Hash the raw little-endian float64 bytes of the given arrays."""
    digest = hashlib.sha256(prefix.encode("utf-8"))
    for array in arrays:
        digest.update(np.ascontiguousarray(array, dtype="<f8").tobytes())
    return digest.hexdigest()


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_json(path, data: Any) -> None:
    """Write an indented, key-sorted JSON document with a trailing newline."""
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")
