"""Canonical JSON serialization used everywhere a byte-deterministic
document is promised (reports, heatmap tables, service responses)."""

from __future__ import annotations

import json


def canonical_json_bytes(obj) -> bytes:
    """Serialize with sorted keys and fixed formatting; identical input,
    identical bytes. Floats keep full precision (shortest round-trip repr)."""
    return (json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n").encode("utf-8")
