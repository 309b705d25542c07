"""Reading and writing uncompressed 24-bit BMP rasters.

The in-memory form is a PixelGrid: three channel planes in blue, green,
red order, each height x width, top row first. Only BI_RGB 24-bit files
are accepted; anything lossy or paletted is refused so that embedded
digits survive a save/load cycle bit for bit.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    BadChannelIndexError,
    CorruptImageError,
    UnsupportedFormatError,
)

BLUE, GREEN, RED = 0, 1, 2
_CHANNEL_NAMES = ("blue", "green", "red")

_FILE_HEADER = struct.Struct("<2sIHHI")
_INFO_HEADER = struct.Struct("<IiiHHIIiiII")

# magic prefixes of formats we recognize but refuse
_FOREIGN_MAGICS = (
    (b"\x89PNG", "PNG"),
    (b"\xff\xd8\xff", "JPEG"),
    (b"GIF8", "GIF"),
    (b"II*\x00", "TIFF"),
    (b"MM\x00*", "TIFF"),
    (b"RIFF", "WebP/RIFF"),
    (b"\x00\x00\x01\x00", "ICO"),
)


@dataclass(frozen=True)
class PixelGrid:
    """A 24-bit raster held as three uint8 planes (blue, green, red)."""

    width: int
    height: int
    planes: np.ndarray  # shape (3, height, width), dtype uint8

    def __post_init__(self):
        if self.planes.shape != (3, self.height, self.width):
            raise ValueError(
                f"plane shape {self.planes.shape} does not match "
                f"{self.height}x{self.width}"
            )
        if self.planes.dtype != np.uint8:
            raise ValueError("planes must be uint8")

    def __eq__(self, other):
        if not isinstance(other, PixelGrid):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and np.array_equal(self.planes, other.planes)
        )

    def channel(self, index: int) -> np.ndarray:
        if index not in (0, 1, 2):
            raise BadChannelIndexError(f"channel index {index} not in 0..2")
        return self.planes[index]

    def copy(self) -> "PixelGrid":
        return PixelGrid(self.width, self.height, self.planes.copy())


def grid_from_planes(blue, green, red) -> PixelGrid:
    planes = np.stack(
        [np.asarray(p, dtype=np.uint8) for p in (blue, green, red)]
    )
    h, w = planes.shape[1:]
    return PixelGrid(w, h, planes)


def channel_name(index: int) -> str:
    if index not in (0, 1, 2):
        raise BadChannelIndexError(f"channel index {index} not in 0..2")
    return _CHANNEL_NAMES[index]


def serialize_channel(grid: PixelGrid, index: int) -> np.ndarray:
    """Flatten one channel row-major: index i maps to row i//w, col i%w."""
    return grid.channel(index).ravel()


def _row_stride(width: int) -> int:
    return (width * 3 + 3) & ~3


def load_image(path) -> PixelGrid:
    """Decode a BMP file into a PixelGrid.

    Raises FileNotFoundError for a missing path, UnsupportedFormatError
    for recognized-but-refused containers (PNG/JPEG/..., compressed or
    non-24-bit BMPs), and CorruptImageError for broken BMP structure.
    """
    data = Path(path).read_bytes()
    if len(data) < 2:
        raise CorruptImageError(f"{path}: too short to be an image")
    for magic, name in _FOREIGN_MAGICS:
        if data.startswith(magic):
            raise UnsupportedFormatError(
                f"{path}: {name} is not supported; convert to uncompressed "
                "24-bit BMP first"
            )
    if not data.startswith(b"BM"):
        raise CorruptImageError(f"{path}: not a BMP file")
    if len(data) < _FILE_HEADER.size + _INFO_HEADER.size:
        raise CorruptImageError(f"{path}: truncated BMP header")

    _, _, _, _, pixel_offset = _FILE_HEADER.unpack_from(data, 0)
    (
        info_size,
        width,
        height,
        planes,
        bit_count,
        compression,
        _,
        _,
        _,
        clr_used,
        _,
    ) = _INFO_HEADER.unpack_from(data, _FILE_HEADER.size)

    if info_size < 40:
        raise CorruptImageError(f"{path}: unsupported header size {info_size}")
    if planes != 1:
        raise CorruptImageError(f"{path}: bad plane count {planes}")
    if compression != 0:
        raise UnsupportedFormatError(
            f"{path}: compressed BMP (method {compression}) is not supported"
        )
    if bit_count != 24:
        raise UnsupportedFormatError(
            f"{path}: only 24-bit BMPs are supported, got {bit_count}-bit"
        )
    if clr_used != 0:
        raise UnsupportedFormatError(f"{path}: paletted BMPs are not supported")

    bottom_up = height > 0
    height = abs(height)
    if width <= 0 or height == 0:
        raise CorruptImageError(f"{path}: bad dimensions {width}x{height}")
    if pixel_offset < _FILE_HEADER.size + info_size or pixel_offset > len(data):
        raise CorruptImageError(f"{path}: bad pixel data offset {pixel_offset}")

    stride = _row_stride(width)
    need = stride * height
    raw = data[pixel_offset : pixel_offset + need]
    if len(raw) < need:
        raise CorruptImageError(
            f"{path}: pixel data truncated ({len(raw)} of {need} bytes)"
        )

    rows = np.frombuffer(raw, dtype=np.uint8).reshape(height, stride)
    bgr = rows[:, : width * 3].reshape(height, width, 3)
    if bottom_up:
        bgr = bgr[::-1]
    planes_arr = np.ascontiguousarray(bgr.transpose(2, 0, 1))
    return PixelGrid(width, height, planes_arr)


def encode_image(grid: PixelGrid) -> bytes:
    """Serialize a PixelGrid to BMP bytes (bottom-up, rows padded to 4)."""
    stride = _row_stride(grid.width)
    image_size = stride * grid.height
    file_size = _FILE_HEADER.size + _INFO_HEADER.size + image_size

    rows = np.zeros((grid.height, stride), dtype=np.uint8)
    bgr = grid.planes.transpose(1, 2, 0)  # (h, w, 3) in file byte order
    rows[:, : grid.width * 3] = bgr.reshape(grid.height, grid.width * 3)
    rows = rows[::-1]  # stored bottom-up

    header = _FILE_HEADER.pack(b"BM", file_size, 0, 0, 54) + _INFO_HEADER.pack(
        40, grid.width, grid.height, 1, 24, 0, image_size, 2835, 2835, 0, 0
    )
    return header + rows.tobytes()


def save_image(grid: PixelGrid, path) -> None:
    Path(path).write_bytes(encode_image(grid))
