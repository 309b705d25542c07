"""Distortion and population metrics for cover/stego comparison."""
from __future__ import annotations

import math

import numpy as np
from scipy.ndimage import uniform_filter

from .bmpio import PixelGrid, serialize_channel
from .errors import DimensionMismatchError, ImageTooSmallError

SSIM_WINDOW = 7
SSIM_K1 = 0.01
SSIM_K2 = 0.03
DYNAMIC_RANGE = 255.0

QUALITY_CSV_HEADER = (
    "cover,stego,psnr_db,ssim,mean_cover,mean_stego,"
    "median_cover,median_stego,std_cover,std_stego,pixels"
)


def _check_shapes(cover: PixelGrid, stego: PixelGrid):
    if (cover.width, cover.height) != (stego.width, stego.height):
        raise DimensionMismatchError(
            f"{cover.width}x{cover.height} vs {stego.width}x{stego.height}"
        )


def psnr(cover: PixelGrid, stego: PixelGrid) -> float:
    """Peak signal-to-noise ratio in dB over all three channels pooled.

    Identical rasters give +inf.
    """
    _check_shapes(cover, stego)
    diff = cover.planes.astype(np.float64) - stego.planes.astype(np.float64)
    mse = float(np.mean(diff * diff))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(DYNAMIC_RANGE**2 / mse)


def luma(grid: PixelGrid) -> np.ndarray:
    """BT.601 luma, rounded half-up to uint8."""
    b = grid.planes[0].astype(np.float64)
    g = grid.planes[1].astype(np.float64)
    r = grid.planes[2].astype(np.float64)
    return np.floor(0.299 * r + 0.587 * g + 0.114 * b + 0.5).astype(np.uint8)


def ssim(cover: PixelGrid, stego: PixelGrid) -> float:
    """Mean structural similarity on the luma plane.

    Sliding 7x7 uniform windows with sample-normalized covariance; the
    half-window border is cropped before averaging.
    """
    _check_shapes(cover, stego)
    if min(cover.width, cover.height) < SSIM_WINDOW:
        raise ImageTooSmallError(
            f"SSIM needs at least {SSIM_WINDOW} pixels per side"
        )
    x = luma(cover).astype(np.float64)
    y = luma(stego).astype(np.float64)

    np_win = SSIM_WINDOW * SSIM_WINDOW
    cov_norm = np_win / (np_win - 1.0)
    ux = uniform_filter(x, SSIM_WINDOW)
    uy = uniform_filter(y, SSIM_WINDOW)
    uxx = uniform_filter(x * x, SSIM_WINDOW)
    uyy = uniform_filter(y * y, SSIM_WINDOW)
    uxy = uniform_filter(x * y, SSIM_WINDOW)
    vx = cov_norm * (uxx - ux * ux)
    vy = cov_norm * (uyy - uy * uy)
    vxy = cov_norm * (uxy - ux * uy)

    c1 = (SSIM_K1 * DYNAMIC_RANGE) ** 2
    c2 = (SSIM_K2 * DYNAMIC_RANGE) ** 2
    s = ((2 * ux * uy + c1) * (2 * vxy + c2)) / (
        (ux * ux + uy * uy + c1) * (vx + vy + c2)
    )
    pad = (SSIM_WINDOW - 1) // 2
    return float(s[pad:-pad, pad:-pad].mean())


def channel_stats(grid: PixelGrid) -> tuple[float, float, float, int]:
    """(mean, median, population std, sample count) of all samples / 255.

    The median of an even-sized pool is the lower middle element.
    """
    samples = grid.planes.ravel()
    n = samples.size
    k = (n - 1) // 2
    median = float(np.partition(samples, k)[k]) / 255.0
    mean = float(samples.mean()) / 255.0
    std = float(samples.astype(np.float64).std()) / 255.0
    return mean, median, std, n


def waveform(grid: PixelGrid, channel: int) -> np.ndarray:
    """Last decimal digit of each sample of one channel, row-major."""
    return (serialize_channel(grid, channel) % 10).astype(np.uint8)


def quality_csv_row(
    cover_name: str, stego_name: str, cover: PixelGrid, stego: PixelGrid
) -> str:
    """One row matching QUALITY_CSV_HEADER."""
    p = psnr(cover, stego)
    s = ssim(cover, stego)
    mc, dc, sc, n = channel_stats(cover)
    ms, ds, ss_, _ = channel_stats(stego)
    p_text = "inf" if math.isinf(p) else format(p, ".6f")
    return ",".join(
        [
            cover_name,
            stego_name,
            p_text,
            format(s, ".9f"),
            format(mc, ".9f"),
            format(ms, ".9f"),
            format(dc, ".9f"),
            format(ds, ".9f"),
            format(sc, ".9f"),
            format(ss_, ".9f"),
            str(n),
        ]
    )
