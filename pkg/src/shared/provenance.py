"""Config hashing helpers."""

import hashlib
import json
from typing import Any

HASH_LENGTH = 16


def canonical_json(payload: Any) -> str:
    """Serialize with sorted keys and no whitespace so equal configs hash equally."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False)


def config_hash(payload: Any) -> str:
    """Return a short sha256 digest of the canonical form of a config payload."""
    digest = hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()
    return digest[:HASH_LENGTH]
