import string

import numpy as np
import pytest

from decistego import (
    CaesarKey,
    GlyphDatabase,
    GlyphFileError,
    GlyphMissingError,
    ImageTooSmallError,
    OverlayOutOfBoundsError,
    OverlayPlacement,
    PixelGrid,
    default_glyphs,
    extract,
    embed,
    find_noisy_block,
    render_key,
)
from decistego.overlay import parse_glyphs, rendered_coordinates

from helpers import flat_grid, random_grid, texture_cover


def test_builtin_font_covers_all_keys():
    db = default_glyphs()
    assert len(db) == 52
    for ch in string.ascii_letters:
        assert ch in db
        points = db.get(ch)
        assert points  # no blank glyphs
        for x, y in points:
            assert 0 <= x < 5 and 0 <= y < 7


def test_glyph_parsing_errors():
    with pytest.raises(GlyphFileError):
        parse_glyphs("A 0,0")  # missing colon
    with pytest.raises(GlyphFileError):
        parse_glyphs("A: 0,zero")
    with pytest.raises(GlyphFileError):
        parse_glyphs("A: 9,0")  # outside the 5x7 box
    with pytest.raises(GlyphFileError):
        parse_glyphs("A:")  # empty glyph
    with pytest.raises(GlyphFileError):
        parse_glyphs("AB: 0,0")  # multi-char name
    db = parse_glyphs("# comment\n\nA: 0,0;1,1\n")
    assert db.get("A") == frozenset({(0, 0), (1, 1)})
    with pytest.raises(GlyphMissingError):
        db.get("B")


def test_find_noisy_block_exhaustive_oracle():
    rng = np.random.default_rng(40)
    for _ in range(5):
        grid = random_grid(rng, 24, 33)
        bs = 8
        got = find_noisy_block(grid, bs)

        best_count, best_pos = -1, None
        for row in range(0, grid.height - bs + 1, bs):
            for col in range(0, grid.width - bs + 1, bs):
                triples = set()
                for r in range(row, row + bs):
                    for c in range(col, col + bs):
                        triples.add(
                            (
                                int(grid.planes[0][r, c]),
                                int(grid.planes[1][r, c]),
                                int(grid.planes[2][r, c]),
                            )
                        )
                if len(triples) > best_count:
                    best_count, best_pos = len(triples), (col, row)
        assert got == best_pos


def test_find_noisy_block_prefers_busy_region():
    planes = np.zeros((3, 32, 32), dtype=np.uint8)
    rng = np.random.default_rng(41)
    planes[:, 16:24, 8:16] = rng.integers(0, 256, (3, 8, 8), dtype=np.uint8)
    grid = PixelGrid(32, 32, planes)
    assert find_noisy_block(grid, 8) == (8, 16)


def test_find_noisy_block_tie_takes_first():
    grid = flat_grid(7, 16, 16)
    assert find_noisy_block(grid, 8) == (0, 0)


def test_find_noisy_block_too_small():
    with pytest.raises(ImageTooSmallError):
        find_noisy_block(flat_grid(0, 4, 4), 8)


def test_render_changes_exactly_the_glyph_cells():
    grid = flat_grid(100, 32, 32)
    db = default_glyphs()
    placement = OverlayPlacement(origin=(3, 2), offset=10)
    out = render_key(grid, CaesarKey("T"), payload_channel=0, placement=placement, glyphs=db)

    expected = rendered_coordinates("T", placement, db)
    np.testing.assert_array_equal(out.channel(0), grid.channel(0))
    for ch in (1, 2):
        diff = out.channel(ch).astype(int) - grid.channel(ch).astype(int)
        changed = {(c, r) for r, c in zip(*np.nonzero(diff))}
        assert changed == expected
        assert set(np.unique(diff[diff != 0])) == {10}


def test_render_offset_reflects_at_the_top():
    grid = flat_grid(250, 16, 16)
    db = default_glyphs()
    placement = OverlayPlacement(origin=(0, 0), offset=10)
    out = render_key(grid, CaesarKey("I"), 2, placement, db)
    diff = out.channel(0).astype(int) - 250
    lit = diff[diff != 0]
    assert lit.size > 0
    assert set(np.unique(lit)) == {-10}  # 250 + 10 > 255, so subtract


def test_render_offset_zero_is_identity():
    rng = np.random.default_rng(42)
    grid = random_grid(rng, 20, 20)
    placement = OverlayPlacement(origin=(1, 1), offset=0)
    out = render_key(grid, CaesarKey("Q"), 1, placement, default_glyphs())
    assert out == grid


def test_render_rejects_out_of_bounds():
    grid = flat_grid(0, 10, 10)
    placement = OverlayPlacement(origin=(7, 7), offset=10)
    with pytest.raises(OverlayOutOfBoundsError):
        render_key(grid, CaesarKey("W"), 0, placement, default_glyphs())


def test_offset_validation():
    with pytest.raises(ValueError):
        OverlayPlacement(origin=(0, 0), offset=128)
    with pytest.raises(ValueError):
        OverlayPlacement(origin=(0, 0), offset=-1)
    OverlayPlacement(origin=(0, 0), offset=127)  # fine


def test_multi_letter_advance():
    db = parse_glyphs("a: 0,0\nb: 0,0\n")
    placement = OverlayPlacement(origin=(2, 3), glyph_advance=6)
    coords = rendered_coordinates("ab", placement, db)
    assert coords == {(2, 3), (8, 3)}


def test_overlay_survives_extraction():
    rng = np.random.default_rng(43)
    grid = texture_cover(rng, 48, 48)
    payload = b"overlay should not disturb the payload channel"
    for offset in (0, 10, 30, 127):
        record = embed(grid, payload, CaesarKey("Z"), overlay=True, offset=offset)
        assert extract(record.stego, CaesarKey("Z")) == payload


def test_overlay_marks_two_channels_only():
    rng = np.random.default_rng(44)
    grid = texture_cover(rng, 48, 48)
    with_mark = embed(grid, b"msg", CaesarKey("m"), overlay=True)
    without = embed(grid, b"msg", CaesarKey("m"), overlay=False)
    assert with_mark.channel == without.channel
    carrier = with_mark.channel
    np.testing.assert_array_equal(
        with_mark.stego.channel(carrier), without.stego.channel(carrier)
    )
    others = [c for c in range(3) if c != carrier]
    changed = sum(
        not np.array_equal(with_mark.stego.channel(c), without.stego.channel(c))
        for c in others
    )
    assert changed >= 1  # at worst one free channel got glyph cells


def test_database_validates_contents():
    with pytest.raises(GlyphFileError):
        GlyphDatabase({"A": frozenset()})
    with pytest.raises(GlyphFileError):
        GlyphDatabase({"A": frozenset({(5, 0)})})
    with pytest.raises(GlyphFileError):
        GlyphDatabase({"AA": frozenset({(0, 0)})})
