"""Shared fixtures: synthetic covers and reference embedders."""
import numpy as np
from scipy import ndimage

from decistego import PixelGrid


def texture_cover(rng, h=256, w=256) -> PixelGrid:
    """Patchwork test scene: flat-ish regions with shading and grain.

    Coarse gaussian field quantized to a handful of surface levels, each
    with its own base brightness, topped with gentle shading, sensor
    noise, a per-channel tint, and a random gamma curve. The gamma LUT
    matters: its uneven bin collisions give the histogram the jagged
    comb structure real photos have, which keeps the chi-square attack
    honest on clean images.
    """
    coarse = ndimage.gaussian_filter(rng.normal(size=(h, w)), 18.0)
    coarse = (coarse - coarse.min()) / (np.ptp(coarse) + 1e-9)
    nlev = int(rng.integers(8, 18))
    labels = np.minimum((coarse * nlev).astype(int), nlev - 1)
    bases = rng.uniform(30, 225, nlev)
    img = bases[labels]
    shade = ndimage.gaussian_filter(rng.normal(size=(h, w)), 9.0)
    shade = 6.0 * shade / (shade.std() + 1e-9)
    noise = rng.normal(0.0, 2.2, (h, w))
    luma = img + shade + noise
    gamma = rng.uniform(0.82, 0.94) if rng.random() < 0.5 else rng.uniform(1.08, 1.25)
    lut = np.rint(255.0 * (np.arange(256) / 255.0) ** gamma).astype(np.uint8)
    chans = []
    for _ in range(3):
        tint = ndimage.gaussian_filter(rng.normal(size=(h, w)), 7.0)
        tint = 5.0 * tint / (tint.std() + 1e-9)
        grain = rng.normal(0.0, 1.5, (h, w))
        raw = np.clip(np.rint(luma + tint + grain), 0, 255).astype(np.uint8)
        chans.append(lut[raw])
    return PixelGrid(w, h, np.stack(chans))


def lsb_replace(plane: np.ndarray, q: float, rng) -> np.ndarray:
    """Classic LSB replacement at rate q — the detectors' design target."""
    out = plane.copy()
    mask = rng.random(plane.shape) < q
    bits = rng.integers(0, 2, plane.shape, dtype=np.uint8)
    out[mask] = (out[mask] & 0xFE) | bits[mask]
    return out


def lsb_stego(grid: PixelGrid, q: float, rng) -> PixelGrid:
    planes = np.stack([lsb_replace(p, q, rng) for p in grid.planes])
    return PixelGrid(grid.width, grid.height, planes)


def random_grid(rng, h=64, w=64) -> PixelGrid:
    planes = rng.integers(0, 256, size=(3, h, w), dtype=np.uint8)
    return PixelGrid(w, h, planes)


def flat_grid(value: int, h=32, w=32) -> PixelGrid:
    planes = np.full((3, h, w), value, dtype=np.uint8)
    return PixelGrid(w, h, planes)
