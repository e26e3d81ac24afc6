"""On-disk cache for A matrices: one ``a-matrix-<n>.json`` file per n.

The checksum is a SHA-256 over the canonical JSON of n, order and entries,
so a hand-edited or truncated file is detected and rebuilt.
"""
from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from .combinat import DEFAULT_CAP, check_cap
from .solver import AMatrix, build_a_matrix, triangularity_witness

ENV_CACHE = "HESSMULT_CACHE"


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_CACHE)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "hessmult"


def cache_path(cache_dir: Path, n: int) -> Path:
    return Path(cache_dir) / f"a-matrix-{n}.json"


def _payload(A: AMatrix) -> dict:
    return {"n": A.n, "order": [list(p) for p in A.order], "entries": A.rows()}


def checksum(payload: dict) -> str:
    body = {k: payload[k] for k in ("n", "order", "entries")}
    canon = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def to_document(A: AMatrix) -> dict:
    doc = _payload(A)
    doc["checksum"] = checksum(doc)
    return doc


def from_document(doc: dict) -> AMatrix:
    """Rebuild an AMatrix, rejecting bad checksums and non-triangular data."""
    try:
        if doc["checksum"] != checksum(doc):
            raise ValueError("checksum mismatch")
        A = AMatrix(int(doc["n"]), tuple(tuple(p) for p in doc["order"]),
                    tuple(tuple(r) for r in doc["entries"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed A-matrix document: {exc}") from exc
    if len(A.entries) != len(A.order) or any(len(r) != len(A.order) for r in A.entries):
        raise ValueError("A-matrix document is not square")
    if triangularity_witness(A) is not None:
        raise ValueError("cached A matrix is not unit upper-triangular")
    return A


def save(A: AMatrix, cache_dir: Path) -> Path:
    path = cache_path(cache_dir, A.n)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".json.tmp")
    tmp.write_text(json.dumps(to_document(A), sort_keys=True) + "\n")
    os.replace(tmp, path)
    return path


def load(n: int, cache_dir: Path) -> AMatrix | None:
    """The cached matrix for n, or None if absent, unreadable or corrupt."""
    path = cache_path(cache_dir, n)
    try:
        A = from_document(json.loads(path.read_text()))
    except (OSError, ValueError):
        return None
    return A if A.n == n else None


def get(n: int, cache_dir: Path, recompute: bool = False, jobs: int = 1,
        cap: int | None = DEFAULT_CAP) -> tuple[AMatrix, bool]:
    """Return ``(A, from_cache)``, writing a fresh file whenever it rebuilds."""
    check_cap(n, cap)
    if not recompute:
        A = load(n, cache_dir)
        if A is not None:
            return A, True
    A = build_a_matrix(n, jobs)
    save(A, cache_dir)
    return A, False
