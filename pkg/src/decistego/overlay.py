"""Graphical key marking.

The key letter is drawn as a 5x7 bitmap into the two channels that do
not carry the payload, by adding a small offset to the samples under
the glyph (reflecting downward when the addition would overflow). The
glyph goes to the busiest block of the image, measured as the number of
distinct (blue, green, red) triples, so it hides in texture rather than
flat sky.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .bmpio import PixelGrid
from .cipher import CaesarKey
from .errors import (
    GlyphFileError,
    GlyphMissingError,
    ImageTooSmallError,
    OverlayOutOfBoundsError,
)

GLYPH_COLS = 5
GLYPH_ROWS = 7


class GlyphDatabase:
    """Letter -> set of lit (x, y) cells inside a 5x7 box."""

    def __init__(self, glyphs: dict[str, frozenset]):
        for ch, points in glyphs.items():
            if len(ch) != 1:
                raise GlyphFileError(f"glyph name {ch!r} is not one character")
            if not points:
                raise GlyphFileError(f"glyph {ch!r} is empty")
            for x, y in points:
                if not (0 <= x < GLYPH_COLS and 0 <= y < GLYPH_ROWS):
                    raise GlyphFileError(
                        f"glyph {ch!r} cell ({x},{y}) outside "
                        f"{GLYPH_COLS}x{GLYPH_ROWS}"
                    )
        self._glyphs = dict(glyphs)

    def __contains__(self, ch: str) -> bool:
        return ch in self._glyphs

    def __len__(self):
        return len(self._glyphs)

    def get(self, ch: str) -> frozenset:
        try:
            return self._glyphs[ch]
        except KeyError:
            raise GlyphMissingError(f"no glyph for {ch!r}") from None


def parse_glyphs(text: str) -> GlyphDatabase:
    """Parse the one-line-per-glyph format '<char>: x,y;x,y;...'."""
    glyphs = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise GlyphFileError(f"line {lineno}: missing ':'")
        name, _, rest = line.partition(":")
        name = name.strip()
        points = set()
        for chunk in rest.strip().split(";"):
            if not chunk:
                continue
            try:
                xs, ys = chunk.split(",")
                points.add((int(xs), int(ys)))
            except ValueError:
                raise GlyphFileError(
                    f"line {lineno}: bad coordinate {chunk!r}"
                ) from None
        glyphs[name] = frozenset(points)
    return GlyphDatabase(glyphs)


def load_glyphs(path) -> GlyphDatabase:
    return parse_glyphs(Path(path).read_text())


_default_db = None


def default_glyphs() -> GlyphDatabase:
    """The built-in A-Za-z font shipped with the package."""
    global _default_db
    if _default_db is None:
        text = resources.files("decistego").joinpath("data/glyphs5x7.txt").read_text()
        _default_db = parse_glyphs(text)
    return _default_db


def find_noisy_block(grid: PixelGrid, block_size: int) -> tuple[int, int]:
    """Top-left (col, row) of the block with the most distinct colors.

    Blocks are scanned row-major at a stride of block_size; the first
    block wins ties.
    """
    if block_size < 1:
        raise ValueError("block size must be positive")
    if block_size > min(grid.width, grid.height):
        raise ImageTooSmallError(
            f"{grid.width}x{grid.height} image cannot hold a "
            f"{block_size}x{block_size} block"
        )
    packed = (
        grid.planes[0].astype(np.int64) << 16
    ) | (grid.planes[1].astype(np.int64) << 8) | grid.planes[2].astype(np.int64)
    best = (-1, (0, 0))
    for row in range(0, grid.height - block_size + 1, block_size):
        for col in range(0, grid.width - block_size + 1, block_size):
            block = packed[row : row + block_size, col : col + block_size]
            count = len(np.unique(block))
            if count > best[0]:
                best = (count, (col, row))
    return best[1]


@dataclass(frozen=True)
class OverlayPlacement:
    """Where and how strongly the key glyph is drawn."""

    origin: tuple[int, int]  # (col, row)
    block_size: int = 8
    offset: int = 10
    glyph_advance: int = field(default=GLYPH_COLS + 1)

    def __post_init__(self):
        if not 0 <= self.offset <= 127:
            raise ValueError("offset must be in 0..127")


def render_key(
    grid: PixelGrid,
    key: CaesarKey,
    payload_channel: int,
    placement: OverlayPlacement,
    glyphs: GlyphDatabase,
) -> PixelGrid:
    """Draw the key letter; returns a new grid, payload channel untouched.

    Samples under glyph cells move by exactly placement.offset on the
    two free channels: up normally, down when up would pass 255.
    """
    grid.channel(payload_channel)  # validates index
    coords = rendered_coordinates(key.char, placement, glyphs)
    for col, row in coords:
        if not (0 <= col < grid.width and 0 <= row < grid.height):
            raise OverlayOutOfBoundsError(
                f"glyph cell ({col},{row}) outside {grid.width}x{grid.height}"
            )
    planes = grid.planes.copy()
    if placement.offset == 0 or not coords:
        return PixelGrid(grid.width, grid.height, planes)
    cols = np.array([c for c, _ in coords])
    rows = np.array([r for _, r in coords])
    for ch in range(3):
        if ch == payload_channel:
            continue
        plane = planes[ch].astype(np.int32)
        vals = plane[rows, cols]
        up = vals + placement.offset
        vals = np.where(up > 255, vals - placement.offset, up)
        plane[rows, cols] = vals
        planes[ch] = plane.astype(np.uint8)
    return PixelGrid(grid.width, grid.height, planes)


def rendered_coordinates(
    text: str, placement: OverlayPlacement, glyphs: GlyphDatabase
) -> set[tuple[int, int]]:
    """Image coordinates every glyph cell of text lands on."""
    ox, oy = placement.origin
    out = set()
    for i, ch in enumerate(text):
        cell = glyphs.get(ch)
        for x, y in cell:
            out.add((ox + i * placement.glyph_advance + x, oy + y))
    return out
