"""Small shared helpers."""

import hashlib
import json


def child_seed(seed, *tags):
    """Derive a stable sub-seed from a root seed and string tags.

    Every random consumer gets its own stream this way, so adding or
    reordering one consumer never perturbs the others.
    """
    h = hashlib.blake2s(digest_size=8)
    h.update(str(int(seed)).encode())
    for tag in tags:
        h.update(b"/")
        h.update(str(tag).encode())
    return int.from_bytes(h.digest(), "big") % (2**63)


def canonical_json(obj):
    """Deterministic JSON text: sorted keys, tight separators."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False)
