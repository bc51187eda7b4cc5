"""Deterministic seed derivation and hash-based uniform draws.

Every random choice in the engine (random baseline scores, fractional
top-k draws, sub-seeds for sweeps) flows through these two functions, so
a single integer seed reproduces any output bit-for-bit, independent of
process, platform, and PYTHONHASHSEED.

The derivation is part of the engine's reproducibility contract:

    message  = ":".join(str(part) for part in parts), UTF-8 encoded
    value    = first 8 bytes of blake2b(message), big-endian unsigned
    uniform  = value / 2**64
"""

from __future__ import annotations

from hashlib import blake2b

_SCALE = 2.0 ** 64


def stable_uniform(*parts: object) -> float:
    """Deterministic pseudo-uniform draw in [0, 1) keyed by `parts`."""
    msg = ":".join(str(p) for p in parts).encode("utf-8")
    raw = int.from_bytes(blake2b(msg, digest_size=8).digest(), "big")
    return raw / _SCALE


def derive_seed(*parts: object) -> int:
    """Derive an independent 64-bit sub-seed from a root seed and labels."""
    msg = ":".join(str(p) for p in parts).encode("utf-8")
    return int.from_bytes(blake2b(msg, digest_size=8).digest(), "big")
