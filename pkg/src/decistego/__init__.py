"""Decimal-digit image steganography, steganalysis, and benchmarking.

The embedding side hides a Caesar-obfuscated byte stream in the last
decimal digits of one colour channel of a lossless BMP and can stamp a
faint key reminder into the other two channels. The analysis side runs
a four-detector battery (chi-square, sample pairs, RS, primary sets)
and fuses the scores into a single verdict. The harness scales both to
whole directories of covers.
"""
from .bmpio import (
    BLUE,
    GREEN,
    RED,
    PixelGrid,
    encode_image,
    grid_from_planes,
    load_image,
    save_image,
    serialize_channel,
)
from .cipher import CaesarKey, decrypt, encrypt
from .codec import (
    DigitStream,
    EmbedRecord,
    HeaderLayout,
    build_digit_stream,
    capacity,
    embed,
    embed_digit,
    extract,
    extract_digit,
    select_channel,
)
from .errors import (
    BadChannelIndexError,
    CapacityExceededError,
    CorruptImageError,
    DimensionMismatchError,
    EmptyCorpusError,
    EmptyInputError,
    GlyphFileError,
    GlyphMissingError,
    ImageTooSmallError,
    InvalidKeyError,
    NoPayloadFoundError,
    OutOfRangeError,
    OverlayOutOfBoundsError,
    PayloadTooLongError,
    StegoError,
    UnsupportedFormatError,
)
from .harness import (
    CorpusConfig,
    CorpusSummary,
    export_features,
    run_corpus,
)
from .metrics import channel_stats, psnr, ssim, waveform
from .overlay import (
    GlyphDatabase,
    OverlayPlacement,
    default_glyphs,
    find_noisy_block,
    load_glyphs,
    render_key,
)
from .steganalysis import (
    DetectorScores,
    analyze,
    chi_square_attack,
    detection_rate,
    primary_sets,
    rs_analysis,
    sample_pairs,
)

__version__ = "0.1.0"

__all__ = [
    "BLUE",
    "GREEN",
    "RED",
    "PixelGrid",
    "encode_image",
    "grid_from_planes",
    "load_image",
    "save_image",
    "serialize_channel",
    "CaesarKey",
    "decrypt",
    "encrypt",
    "DigitStream",
    "EmbedRecord",
    "HeaderLayout",
    "build_digit_stream",
    "capacity",
    "embed",
    "embed_digit",
    "extract",
    "extract_digit",
    "select_channel",
    "StegoError",
    "UnsupportedFormatError",
    "CorruptImageError",
    "BadChannelIndexError",
    "InvalidKeyError",
    "OutOfRangeError",
    "PayloadTooLongError",
    "CapacityExceededError",
    "NoPayloadFoundError",
    "DimensionMismatchError",
    "ImageTooSmallError",
    "GlyphMissingError",
    "OverlayOutOfBoundsError",
    "GlyphFileError",
    "EmptyCorpusError",
    "EmptyInputError",
    "CorpusConfig",
    "CorpusSummary",
    "export_features",
    "run_corpus",
    "channel_stats",
    "psnr",
    "ssim",
    "waveform",
    "GlyphDatabase",
    "OverlayPlacement",
    "default_glyphs",
    "find_noisy_block",
    "load_glyphs",
    "render_key",
    "DetectorScores",
    "analyze",
    "chi_square_attack",
    "detection_rate",
    "primary_sets",
    "rs_analysis",
    "sample_pairs",
]
