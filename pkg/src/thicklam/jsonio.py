"""Canonical JSON, content hashes, and replayable certificate envelopes.

Every certificate file carries the config that produced it plus a content
hash; ``replay`` recomputes the hash and re-verifies the payload, so a
tampered file is always detected.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Any

FORMAT_VERSION = 1


def frac_str(x: Fraction | int) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def parse_frac(s: str) -> Fraction:
    if "/" in s:
        num, den = s.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(s)


def _default(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return {"__frac__": frac_str(obj)}
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"not JSON-serializable: {type(obj)}")


def _revive(obj: Any) -> Any:
    if isinstance(obj, dict):
        if set(obj) == {"__frac__"}:
            return parse_frac(obj["__frac__"])
        return {k: _revive(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_revive(v) for v in obj]
    return obj


def canon_dumps(obj: Any) -> str:
    return json.dumps(obj, default=_default, sort_keys=True, separators=(",", ":"))


def loads(text: str) -> Any:
    return _revive(json.loads(text))


def content_hash(obj: Any) -> str:
    return hashlib.sha256(canon_dumps(obj).encode()).hexdigest()


def wrap_certificate(kind: str, config: Any, payload: Any, manifest_hash: str | None = None) -> dict:
    body = {
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "config": config,
        "payload": payload,
        "manifest_hash": manifest_hash,
    }
    return {**body, "integrity": content_hash(body)}


def check_integrity(doc: dict) -> bool:
    body = {k: v for k, v in doc.items() if k != "integrity"}
    return doc.get("integrity") == content_hash(body)


def save_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(canon_dumps(obj) + "\n")


def load_json(path: str | Path) -> Any:
    return loads(Path(path).read_text())
