"""Time-ordered unique identifiers (ULID) for archive records."""

from __future__ import annotations

import secrets
import time

CROCKFORD_ALPHABET = "0123456789ABCDEFGHJKMNPQRSTVWXYZ"
ULID_LENGTH = 26

_last_ms = 0
_last_value = 0


def new_ulid(timestamp_ms: int | None = None) -> str:
    """Return a fresh 26-character ULID.

    Lexicographic order follows creation order: the 48-bit millisecond
    timestamp leads, and within the same millisecond the random tail is
    bumped monotonically.
    """
    global _last_ms, _last_value
    ms = int(time.time() * 1000) if timestamp_ms is None else timestamp_ms
    if ms == _last_ms:
        value = _last_value + 1
    else:
        value = (ms << 80) | int.from_bytes(secrets.token_bytes(10), "big")
    _last_ms, _last_value = ms, value
    return _encode(value)


def _encode(value: int) -> str:
    chars = []
    for _ in range(ULID_LENGTH):
        chars.append(CROCKFORD_ALPHABET[value & 0x1F])
        value >>= 5
    return "".join(reversed(chars))


def is_ulid(text: str) -> bool:
    return len(text) == ULID_LENGTH and all(c in CROCKFORD_ALPHABET for c in text)
