import math

import numpy as np
import pytest
from skimage.metrics import structural_similarity as sk_ssim

from decistego import (
    CaesarKey,
    DimensionMismatchError,
    ImageTooSmallError,
    PixelGrid,
    channel_stats,
    embed,
    grid_from_planes,
    psnr,
    ssim,
    waveform,
)
from decistego.metrics import QUALITY_CSV_HEADER, luma, quality_csv_row

from helpers import flat_grid, random_grid, texture_cover


def test_psnr_identical_is_infinite():
    g = flat_grid(77, 16, 16)
    assert math.isinf(psnr(g, g.copy()))


def test_psnr_uniform_unit_error():
    # every sample off by one: MSE = 1, so PSNR = 20*log10(255)
    a = flat_grid(100, 16, 16)
    b = flat_grid(101, 16, 16)
    assert psnr(a, b) == pytest.approx(20 * math.log10(255), abs=1e-9)
    assert psnr(a, b) == pytest.approx(48.130803609, abs=1e-6)


def test_psnr_known_mse():
    a = flat_grid(0, 4, 4)
    planes = a.planes.copy()
    planes[0, 0, 0] = 16  # single error of 16 over 48 samples
    b = PixelGrid(4, 4, planes)
    mse = 16**2 / 48
    assert psnr(a, b) == pytest.approx(10 * math.log10(255**2 / mse), abs=1e-9)


def test_psnr_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        psnr(flat_grid(0, 8, 8), flat_grid(0, 8, 9))


def test_luma_coefficients():
    g = grid_from_planes(
        np.full((2, 2), 255), np.zeros((2, 2)), np.zeros((2, 2))
    )
    assert luma(g)[0, 0] == int(0.114 * 255 + 0.5)  # blue-only patch
    r = grid_from_planes(
        np.zeros((2, 2)), np.zeros((2, 2)), np.full((2, 2), 255)
    )
    assert luma(r)[0, 0] == int(0.299 * 255 + 0.5)
    w = flat_grid(200, 2, 2)
    assert luma(w)[0, 0] == 200


def test_ssim_identical_is_one():
    rng = np.random.default_rng(50)
    g = random_grid(rng, 24, 24)
    assert ssim(g, g.copy()) == pytest.approx(1.0, abs=1e-12)


def test_ssim_matches_reference_implementation():
    rng = np.random.default_rng(51)
    for _ in range(6):
        cover = texture_cover(rng, 40, 56)
        stego = embed(cover, b"ssim probe payload", CaesarKey("s")).stego
        ours = ssim(cover, stego)
        ref = sk_ssim(luma(cover), luma(stego), data_range=255)
        assert ours == pytest.approx(ref, abs=1e-6)


def test_ssim_detects_structural_damage():
    rng = np.random.default_rng(52)
    cover = texture_cover(rng, 64, 64)
    inverted = PixelGrid(64, 64, 255 - cover.planes)
    assert ssim(cover, inverted) < 0.9


def test_ssim_window_minimum():
    with pytest.raises(ImageTooSmallError):
        ssim(flat_grid(0, 6, 20), flat_grid(0, 6, 20))
    ssim(flat_grid(0, 7, 7), flat_grid(0, 7, 7))  # exactly one window is fine


def test_channel_stats_extremes():
    mean, median, std, n = channel_stats(flat_grid(0, 10, 10))
    assert (mean, median, std, n) == (0.0, 0.0, 0.0, 300)
    mean, median, std, n = channel_stats(flat_grid(255, 10, 10))
    assert (mean, median, std, n) == (1.0, 1.0, 0.0, 300)


def test_channel_stats_median_is_lower_middle():
    planes = np.zeros((3, 1, 2), dtype=np.uint8)
    planes[0, 0] = [10, 20]
    planes[1, 0] = [30, 40]
    planes[2, 0] = [50, 60]
    g = PixelGrid(2, 1, planes)
    mean, median, std, n = channel_stats(g)
    assert n == 6
    assert median == pytest.approx(30 / 255)  # lower of the two middles
    assert mean == pytest.approx(np.mean([10, 20, 30, 40, 50, 60]) / 255)
    assert std == pytest.approx(np.std([10, 20, 30, 40, 50, 60]) / 255)


def test_waveform_is_last_digit_sequence():
    planes = np.zeros((3, 1, 3), dtype=np.uint8)
    planes[1, 0] = [10, 21, 32]
    g = PixelGrid(3, 1, planes)
    assert waveform(g, 1).tolist() == [0, 1, 2]
    assert waveform(g, 0).tolist() == [0, 0, 0]


def test_waveform_row_major_order():
    planes = np.zeros((3, 2, 2), dtype=np.uint8)
    planes[2] = [[1, 2], [3, 4]]
    g = PixelGrid(2, 2, planes)
    assert waveform(g, 2).tolist() == [1, 2, 3, 4]


def test_quality_csv_row_shape():
    rng = np.random.default_rng(53)
    cover = texture_cover(rng, 32, 32)
    stego = embed(cover, b"q", CaesarKey("q")).stego
    row = quality_csv_row("c.bmp", "s.bmp", cover, stego)
    fields = row.split(",")
    assert len(fields) == len(QUALITY_CSV_HEADER.split(","))
    assert fields[0] == "c.bmp" and fields[1] == "s.bmp"
    assert float(fields[2]) > 30  # psnr
    assert 0 <= float(fields[3]) <= 1  # ssim
    assert int(fields[10]) == 3 * 32 * 32
    # identical pair serializes psnr as inf
    row2 = quality_csv_row("c.bmp", "c.bmp", cover, cover.copy())
    assert row2.split(",")[2] == "inf"
    assert float(row2.split(",")[3]) == pytest.approx(1.0, abs=1e-9)
