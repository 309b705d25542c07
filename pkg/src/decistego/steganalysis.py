"""Statistical LSB steganalysis battery.

Four detectors, each returning a score in [0, 1] per image or None when
its statistic is undefined there:

* chi_square_attack: pair-of-values histogram test; the score is the
  probability that the even/odd bins are as equalized as observed.
* sample_pairs: quadratic embedding-rate estimator over horizontally
  adjacent sample pairs.
* rs_analysis: dual-statistics estimator from smoothness of pixel
  groups under LSB and shifted-LSB flipping, group size 4, mask 0110.
* primary_sets: imbalance of the pair classes that can only shrink or
  only grow under LSB flipping.

Scores of an image fuse by plain mean of whatever is present; a fused
score above the threshold marks the image as suspicious.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import chi2 as _chi2

from .bmpio import PixelGrid
from .errors import EmptyInputError

DEFAULT_THRESHOLD = 0.2

ANALYSIS_CSV_HEADER = (
    "FileName,Crossed threshold?,Data Size,Primary-Sets,Chi-Square,"
    "Sample-Pairs,RS-analysis,Fusion-(mean)"
)

# relative slack for treating a barely negative discriminant as a
# tangent root; sampling noise around full embedding sits well inside
_DISC_SLACK = 0.05


def _present_mean(values) -> Optional[float]:
    present = [v for v in values if v is not None]
    if not present:
        return None
    return sum(present) / len(present)


def _chi_square_channel(plane: np.ndarray) -> Optional[float]:
    hist = np.bincount(plane.ravel(), minlength=256).astype(np.float64)
    pairs = hist.reshape(128, 2)
    totals = pairs.sum(axis=1)
    keep = totals > 0
    df = int(keep.sum()) - 1
    if df < 1:
        return None
    expected = totals[keep] / 2.0
    stat = float(((pairs[keep, 0] - expected) ** 2 / expected).sum())
    return float(_chi2.sf(stat, df))


def chi_square_attack(grid: PixelGrid) -> Optional[float]:
    return _present_mean(_chi_square_channel(p) for p in grid.planes)


def _horizontal_pairs(plane: np.ndarray):
    u = plane[:, :-1].ravel().astype(np.int32)
    v = plane[:, 1:].ravel().astype(np.int32)
    return u, v


def _pair_classes(u: np.ndarray, v: np.ndarray):
    """Counts over the primary-set partition of sample pairs.

    X: odd difference, smaller member even (these pairs can only lose
       distance under LSB flips); Y: odd difference, smaller member odd
       (can only gain); Z: equal; W: both members in the same LSB pair.
    """
    odd = ((u ^ v) & 1) == 1
    mn = np.minimum(u, v)
    x = int(np.count_nonzero(odd & ((mn & 1) == 0)))
    y = int(np.count_nonzero(odd & ((mn & 1) == 1)))
    z = int(np.count_nonzero(u == v))
    w = int(np.count_nonzero((u >> 1) == (v >> 1)))
    return x, y, z, w


def _sample_pairs_channel(plane: np.ndarray) -> Optional[float]:
    if plane.shape[1] < 2:
        return None
    x, y, z, w = _pair_classes(*_horizontal_pairs(plane))
    if w == 0:
        return None
    # (w/2) p^2 - (z + x - y) p + (x - y) = 0; smaller root is the rate
    b = float(z + x - y)
    c = float(x - y)
    disc = b * b - 2.0 * w * c
    scale = b * b + 2.0 * w * abs(c) + 1.0
    if disc < 0:
        if -disc > _DISC_SLACK * scale:
            return None
        disc = 0.0
    root = float(np.sqrt(disc))
    if b >= 0:
        p = 2.0 * c / (b + root) if (b + root) != 0 else 0.0
    else:
        p = (b - root) / w
    return min(max(p, 0.0), 1.0)


def sample_pairs(grid: PixelGrid) -> Optional[float]:
    return _present_mean(_sample_pairs_channel(p) for p in grid.planes)


def _primary_sets_channel(plane: np.ndarray) -> Optional[float]:
    if plane.shape[1] < 2 and plane.shape[0] < 2:
        return None
    hu, hv = _horizontal_pairs(plane)
    vu = plane[:-1, :].ravel().astype(np.int32)
    vv = plane[1:, :].ravel().astype(np.int32)
    u = np.concatenate([hu, vu])
    v = np.concatenate([hv, vv])
    x, y, _, _ = _pair_classes(u, v)
    if x + y == 0:
        return None
    return abs(x - y) / float(x + y)


def primary_sets(grid: PixelGrid) -> Optional[float]:
    return _present_mean(_primary_sets_channel(p) for p in grid.planes)


def _shift_flip(a: np.ndarray) -> np.ndarray:
    return ((a + 1) ^ 1) - 1


def _rs_delta(groups: np.ndarray, shifted: bool) -> int:
    """R - S for one mask direction over pre-cut groups of four."""
    base = np.abs(np.diff(groups, axis=1)).sum(axis=1)
    flipped = groups.copy()
    flipped[:, 1:3] = (
        _shift_flip(flipped[:, 1:3]) if shifted else flipped[:, 1:3] ^ 1
    )
    after = np.abs(np.diff(flipped, axis=1)).sum(axis=1)
    return int(np.count_nonzero(after > base)) - int(
        np.count_nonzero(after < base)
    )


def _rs_channel(plane: np.ndarray) -> Optional[float]:
    h, w = plane.shape
    if w < 4:
        return None
    # overlapping windows: 4x the groups of a disjoint tiling, which
    # keeps the discriminant out of the noise floor at high rates
    groups = (
        np.lib.stride_tricks.sliding_window_view(plane, 4, axis=1)
        .reshape(-1, 4)
        .astype(np.int32)
    )
    flipped_groups = groups ^ 1

    d0 = _rs_delta(groups, shifted=False)
    dm0 = _rs_delta(groups, shifted=True)
    d1 = _rs_delta(flipped_groups, shifted=False)
    dm1 = _rs_delta(flipped_groups, shifted=True)

    a = 2.0 * (d0 + d1)
    b = float(dm0 - dm1 - d1 - 3.0 * d0)
    c = float(d0 - dm0)
    if a == 0.0:
        if b == 0.0:
            return None
        z = -c / b
    else:
        disc = b * b - 4.0 * a * c
        scale = b * b + 4.0 * abs(a * c) + 1.0
        if disc < 0:
            if -disc > _DISC_SLACK * scale:
                return None
            disc = 0.0
        root = float(np.sqrt(disc))
        z1 = (-b + root) / (2.0 * a)
        z2 = (-b - root) / (2.0 * a)
        z = z1 if abs(z1) < abs(z2) else z2
    if abs(z - 0.5) < 1e-12:
        return None
    p = z / (z - 0.5)
    return min(max(p, 0.0), 1.0)


def rs_analysis(grid: PixelGrid) -> Optional[float]:
    return _present_mean(_rs_channel(p) for p in grid.planes)


@dataclass(frozen=True)
class DetectorScores:
    """One image's detector outputs plus the fused verdict."""

    primary_sets: Optional[float]
    chi_square: Optional[float]
    sample_pairs: Optional[float]
    rs_analysis: Optional[float]
    fusion: float
    crossed_threshold: bool
    estimated_bytes: int


def analyze(grid: PixelGrid, threshold: float = DEFAULT_THRESHOLD) -> DetectorScores:
    """Run the whole battery and fuse.

    Fusion is the mean of present scores (0.0 when nothing is present);
    the verdict is fusion > threshold; the size guess scales fusion by
    the image's total LSB capacity in bytes.
    """
    scores = (
        primary_sets(grid),
        chi_square_attack(grid),
        sample_pairs(grid),
        rs_analysis(grid),
    )
    fusion = _present_mean(scores)
    fusion = 0.0 if fusion is None else fusion
    lsb_capacity_bytes = grid.width * grid.height * 3 / 8.0
    return DetectorScores(
        primary_sets=scores[0],
        chi_square=scores[1],
        sample_pairs=scores[2],
        rs_analysis=scores[3],
        fusion=fusion,
        crossed_threshold=fusion > threshold,
        estimated_bytes=round(fusion * lsb_capacity_bytes),
    )


def detection_rate(reports) -> float:
    """Percentage of reports whose verdict crossed the threshold."""
    reports = list(reports)
    if not reports:
        raise EmptyInputError("no reports to aggregate")
    hits = sum(1 for r in reports if r.crossed_threshold)
    return 100.0 * hits / len(reports)


def _score_text(value: Optional[float]) -> str:
    if value is None:
        return "NaN"
    return format(value, ".6g")


def analysis_csv_row(name: str, scores: DetectorScores) -> str:
    return ",".join(
        [
            name,
            "TRUE" if scores.crossed_threshold else "FALSE",
            str(scores.estimated_bytes),
            _score_text(scores.primary_sets),
            _score_text(scores.chi_square),
            _score_text(scores.sample_pairs),
            _score_text(scores.rs_analysis),
            format(scores.fusion, ".6g"),
        ]
    )
