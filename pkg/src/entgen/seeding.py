"""Deterministic seed derivation.

Every random sub-task derives its seed from one root seed and a label, so a
whole run is reproducible from the root seed alone and independent sub-runs
never share an RNG stream. Hashing goes through SHA-256 rather than Python's
``hash`` so derivations are stable across processes and platforms.
"""

import hashlib


def derive_seed(root: int, label: str) -> int:
    """Derive a 64-bit child seed from ``root`` and a component label."""
    digest = hashlib.sha256(f"{root}:{label}".encode()).digest()
    return int.from_bytes(digest[:8], "little")
