"""Embedding and extraction of payloads in decimal pixel digits.

A payload byte is encrypted to a value in 65..377 and written as three
decimal digits. Each digit replaces the last decimal digit of one pixel
sample in the carrier channel. A 10-digit header (magic 9,7 plus an
8-digit zero-padded byte count) precedes the body so extraction can
locate and bound the payload without trial decryption of the whole
plane. The carrier channel is chosen by trial-embedding the stream into
each channel and keeping the one whose difference plane has the least
population standard deviation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import overlay as overlay_mod
from .bmpio import PixelGrid, serialize_channel
from .cipher import CaesarKey, decrypt, encrypt
from .errors import (
    CapacityExceededError,
    NoPayloadFoundError,
    OutOfRangeError,
    PayloadTooLongError,
)

MAGIC = (9, 7)
LENGTH_DIGITS = 8
HEADER_DIGITS = 2 + LENGTH_DIGITS
MAX_PAYLOAD_BYTES = 10**LENGTH_DIGITS - 1


@dataclass(frozen=True)
class HeaderLayout:
    """Fixed 10-digit stream prefix: magic pair then payload byte count."""

    payload_length: int

    def digits(self) -> np.ndarray:
        if not 0 <= self.payload_length <= MAX_PAYLOAD_BYTES:
            raise PayloadTooLongError(
                f"payload of {self.payload_length} bytes does not fit an "
                f"{LENGTH_DIGITS}-digit length field"
            )
        text = f"{self.payload_length:0{LENGTH_DIGITS}d}"
        return np.array(list(MAGIC) + [int(c) for c in text], dtype=np.uint8)


@dataclass(frozen=True)
class DigitStream:
    """Header digits followed by three digits per encrypted payload byte."""

    digits: np.ndarray
    source_length: int

    def __len__(self):
        return len(self.digits)


@dataclass(frozen=True)
class EmbedRecord:
    """Everything embed() decided: the stego raster, the carrier channel,
    the header layout, where the key glyph landed (if drawn), and the
    per-channel trial standard deviations."""

    stego: PixelGrid
    channel: int
    header: HeaderLayout
    overlay_origin: Optional[tuple[int, int]]
    channel_stds: tuple[float, float, float]


def build_digit_stream(payload: bytes, key: CaesarKey) -> DigitStream:
    """Encrypt the payload and lay it out as a decimal digit sequence."""
    if len(payload) > MAX_PAYLOAD_BYTES:
        raise PayloadTooLongError(
            f"{len(payload)} bytes exceeds the {MAX_PAYLOAD_BYTES}-byte limit"
        )
    header = HeaderLayout(len(payload)).digits()
    if not payload:
        return DigitStream(header, 0)
    values = np.frombuffer(payload, dtype=np.uint8).astype(np.int32) + key.offset
    body = np.stack(
        [values // 100, (values // 10) % 10, values % 10], axis=1
    ).ravel().astype(np.uint8)
    return DigitStream(np.concatenate([header, body]), len(payload))


def embed_digit(pixel: int, digit: int) -> int:
    """Replace the last decimal digit of a sample, stepping down a ten
    when the result would leave the byte range."""
    result = (pixel // 10) * 10 + digit
    if result > 255:
        result -= 10
    return result


def extract_digit(pixel: int) -> int:
    return pixel % 10


def _embed_into_plane(flat: np.ndarray, digits: np.ndarray) -> np.ndarray:
    out = flat.astype(np.int32, copy=True)
    n = len(digits)
    cand = (out[:n] // 10) * 10 + digits
    cand[cand > 255] -= 10
    out[:n] = cand
    return out.astype(np.uint8)


def capacity(grid: PixelGrid) -> int:
    """Largest payload byte count one channel can hold."""
    return max((grid.width * grid.height - HEADER_DIGITS) // 3, 0)


def select_channel(grid: PixelGrid, stream: DigitStream) -> tuple[int, tuple[float, float, float]]:
    """Pick the carrier channel.

    The stream is trial-embedded into the first len(stream) samples of
    each channel; the population standard deviation of (original minus
    candidate) over the whole plane decides, lowest index winning ties.
    """
    n_pixels = grid.width * grid.height
    digits = stream.digits.astype(np.int32)
    if len(digits) > n_pixels:
        raise CapacityExceededError(
            f"stream of {len(digits)} digits exceeds {n_pixels} samples"
        )
    stds = []
    for ch in range(3):
        flat = serialize_channel(grid, ch).astype(np.int32)
        cand = (flat[: len(digits)] // 10) * 10 + digits
        cand[cand > 255] -= 10
        diff = flat[: len(digits)] - cand
        # diff is zero beyond the stream, so fold the tail into the moments
        total = diff.sum(dtype=np.int64)
        total_sq = (diff.astype(np.int64) ** 2).sum()
        mean = total / n_pixels
        stds.append(float(np.sqrt(total_sq / n_pixels - mean * mean)))
    best = int(np.argmin(stds))
    return best, (stds[0], stds[1], stds[2])


def embed(
    grid: PixelGrid,
    payload: bytes,
    key: CaesarKey,
    *,
    overlay: bool = True,
    channel: Optional[int] = None,
    offset: int = 10,
    block_size: int = 8,
    glyphs=None,
) -> EmbedRecord:
    """Hide payload in one channel of grid; optionally draw the key.

    channel=None lets the standard-deviation rule pick the carrier;
    passing 0..2 forces it. The key glyph, when enabled, goes on the two
    non-carrier channels at the most color-diverse block.
    """
    stream = build_digit_stream(payload, key)
    n_pixels = grid.width * grid.height
    if HEADER_DIGITS + 3 * len(payload) > n_pixels:
        raise CapacityExceededError(
            f"payload of {len(payload)} bytes needs "
            f"{HEADER_DIGITS + 3 * len(payload)} samples, cover has {n_pixels}"
        )
    picked, stds = select_channel(grid, stream)
    if channel is not None:
        grid.channel(channel)  # validates index
        picked = channel

    planes = grid.planes.copy()
    flat = planes[picked].ravel()
    planes[picked] = _embed_into_plane(flat, stream.digits.astype(np.int32)).reshape(
        grid.height, grid.width
    )
    stego = PixelGrid(grid.width, grid.height, planes)

    origin = None
    if overlay:
        db = glyphs if glyphs is not None else overlay_mod.default_glyphs()
        origin = overlay_mod.find_noisy_block(stego, block_size)
        placement = overlay_mod.OverlayPlacement(
            origin=origin, block_size=block_size, offset=offset
        )
        stego = overlay_mod.render_key(stego, key, picked, placement, db)

    return EmbedRecord(
        stego=stego,
        channel=picked,
        header=HeaderLayout(len(payload)),
        overlay_origin=origin,
        channel_stds=stds,
    )


def _try_channel(grid: PixelGrid, key: CaesarKey, ch: int) -> bytes:
    digits = serialize_channel(grid, ch).astype(np.int32) % 10
    if len(digits) < HEADER_DIGITS:
        raise NoPayloadFoundError("image too small for a header")
    if (digits[0], digits[1]) != MAGIC:
        raise NoPayloadFoundError(f"no magic in channel {ch}")
    length = int("".join(str(d) for d in digits[2:HEADER_DIGITS]))
    end = HEADER_DIGITS + 3 * length
    if end > len(digits):
        raise NoPayloadFoundError(
            f"declared length {length} exceeds channel capacity"
        )
    groups = digits[HEADER_DIGITS:end].reshape(length, 3)
    values = groups[:, 0] * 100 + groups[:, 1] * 10 + groups[:, 2]
    return decrypt(values.tolist(), key)


def extract(
    grid: PixelGrid, key: CaesarKey, *, channel: Optional[int] = None
) -> bytes:
    """Recover a payload embedded by embed().

    With channel=None all three channels are tried in index order and
    the first that carries a well-formed header and decrypts cleanly
    wins. A forced channel surfaces decryption range errors as-is.
    """
    if channel is not None:
        return _try_channel(grid, key, channel)
    for ch in range(3):
        try:
            return _try_channel(grid, key, ch)
        except (NoPayloadFoundError, OutOfRangeError):
            continue
    raise NoPayloadFoundError("no channel holds a decodable payload")
