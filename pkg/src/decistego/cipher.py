"""Caesar-style byte obfuscation keyed by a single ASCII letter.

Each plaintext byte is shifted up by the key letter's ASCII code with no
wraparound, so ciphertext values live in 65..377 and always fit three
decimal digits. Decryption subtracts the same offset and refuses values
that do not map back into 0..255.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidKeyError, OutOfRangeError

MIN_CIPHER_VALUE = 65   # byte 0 with key 'A'
MAX_CIPHER_VALUE = 377  # byte 255 with key 'z'


@dataclass(frozen=True)
class CaesarKey:
    """A single letter in [A-Za-z]; its ASCII code is the shift offset."""

    char: str

    def __post_init__(self):
        if len(self.char) != 1 or not ("A" <= self.char <= "Z" or "a" <= self.char <= "z"):
            raise InvalidKeyError(
                f"key must be one ASCII letter, got {self.char!r}"
            )

    @property
    def offset(self) -> int:
        return ord(self.char)


def encrypt(plain: bytes, key: CaesarKey) -> list[int]:
    """Shift every byte up by the key offset; no modular wrap."""
    off = key.offset
    return [b + off for b in plain]


def decrypt(values, key: CaesarKey) -> bytes:
    """Invert encrypt. Raises OutOfRangeError if any value cannot be a
    shifted byte under this key."""
    off = key.offset
    out = bytearray(len(values))
    for i, v in enumerate(values):
        b = v - off
        if b < 0 or b > 255:
            raise OutOfRangeError(
                f"value {v} at position {i} is outside {off}..{off + 255} "
                f"for key {key.char!r}"
            )
        out[i] = b
    return bytes(out)
