"""Canonical JSON serialization and short content fingerprints.

Fingerprints chain pipeline stages together: a stage result records the
fingerprint of everything it was computed from, so stale combinations are
detectable instead of silently wrong.
"""

from __future__ import annotations

import hashlib
import json

__all__ = ["canonical_json", "fingerprint"]


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def fingerprint(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()[:16]
