"""Command-line front end.

Exit codes: 0 on success, 1 for bad usage, 2 for data problems
(capacity, undecodable payloads, unsupported or corrupt images),
3 for I/O failures.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import codec, harness, metrics, steganalysis
from .bmpio import load_image, save_image
from .cipher import CaesarKey
from .errors import InvalidKeyError, StegoError
from .harness import CorpusConfig
from .overlay import load_glyphs

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_IO = 3

_CHANNELS = {"b": 0, "g": 1, "r": 2}
_CHANNEL_NAMES = {v: k for k, v in _CHANNELS.items()}


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the contract here is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _channel_arg(text: str) -> int | None:
    if text == "auto":
        return None
    try:
        return _CHANNELS[text]
    except KeyError:
        raise argparse.ArgumentTypeError(
            f"channel must be auto, b, g, or r (got {text!r})"
        )


def _forced_channel_arg(text: str) -> int:
    try:
        return _CHANNELS[text]
    except KeyError:
        raise argparse.ArgumentTypeError(
            f"channel must be b, g, or r (got {text!r})"
        )


def _key_arg(text: str) -> CaesarKey:
    try:
        return CaesarKey(text)
    except InvalidKeyError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _offset_arg(text: str) -> int:
    value = int(text)
    if not 0 <= value <= 127:
        raise argparse.ArgumentTypeError(f"offset must be in 0..127, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="decistego",
        description="Decimal-digit image steganography and steganalysis.",
        epilog="Only uncompressed 24-bit BMP images are accepted; convert "
               "other formats first (e.g. `magick photo.tif photo.bmp`).",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("embed", help="hide a file inside a BMP cover")
    p.add_argument("--cover", required=True, type=Path)
    p.add_argument("--message", required=True, type=Path)
    p.add_argument("--key", required=True, type=_key_arg)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--no-overlay", action="store_true")
    p.add_argument("--channel", type=_channel_arg, default=None,
                   help="auto (default), b, g, or r")
    p.add_argument("--offset", type=_offset_arg, default=10,
                   help="overlay brightness offset, 0..127")
    p.add_argument("--glyph-file", type=Path, default=None)

    p = sub.add_parser("extract", help="recover a hidden file from a stego BMP")
    p.add_argument("--stego", required=True, type=Path)
    p.add_argument("--key", required=True, type=_key_arg)
    p.add_argument("--channel", type=_forced_channel_arg, default=None,
                   help="b, g, or r; omit to search all channels")
    p.add_argument("--out", type=Path, default=None,
                   help="write payload here instead of stdout")

    p = sub.add_parser("analyze", help="run the detector battery on images")
    p.add_argument("paths", nargs="+", type=Path)
    p.add_argument("--threshold", type=float,
                   default=steganalysis.DEFAULT_THRESHOLD)
    p.add_argument("--csv", type=Path, default=None,
                   help="write the result table here instead of stdout")

    p = sub.add_parser("quality", help="compare a stego image to its cover")
    p.add_argument("--cover", required=True, type=Path)
    p.add_argument("--stego", required=True, type=Path)
    p.add_argument("--csv", type=Path, default=None)

    p = sub.add_parser("waveform", help="dump a channel's last decimal digits")
    p.add_argument("--image", required=True, type=Path)
    p.add_argument("--channel", required=True, type=_forced_channel_arg,
                   help="b, g, or r")
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("bench", help="embed into every cover in a directory")
    p.add_argument("--cover-dir", required=True, type=Path)
    p.add_argument("--out-dir", required=True, type=Path)
    p.add_argument("--message", required=True, type=Path)
    p.add_argument("--key", required=True, type=_key_arg)
    p.add_argument("--ssim-filter", type=float,
                   default=harness.DEFAULT_SSIM_FILTER,
                   help="good/worst split point; negative disables")
    p.add_argument("--threshold", type=float,
                   default=steganalysis.DEFAULT_THRESHOLD)
    p.add_argument("--no-overlay", action="store_true")
    p.add_argument("--report", required=True, type=Path)
    p.add_argument("--csv", type=Path, default=None,
                   help="per-image rows (default: <out-dir>/results.csv)")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("features", help="export histogram/detector features")
    p.add_argument("--dir", required=True, type=Path)
    p.add_argument("--csv", required=True, type=Path)
    return parser


def _cmd_embed(args) -> int:
    payload = args.message.read_bytes()
    cover = load_image(args.cover)
    glyphs = load_glyphs(args.glyph_file) if args.glyph_file else None
    record = codec.embed(
        cover,
        payload,
        args.key,
        overlay=not args.no_overlay,
        channel=args.channel,
        offset=args.offset,
        glyphs=glyphs,
    )
    save_image(record.stego, args.out)
    print(f"embedded {len(payload)} bytes into channel "
          f"{_CHANNEL_NAMES[record.channel]} -> {args.out}")
    return EXIT_OK


def _cmd_extract(args) -> int:
    grid = load_image(args.stego)
    payload = codec.extract(grid, args.key, channel=args.channel)
    if args.out is not None:
        args.out.write_bytes(payload)
        print(f"extracted {len(payload)} bytes -> {args.out}")
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    return EXIT_OK


def _cmd_analyze(args) -> int:
    lines = [steganalysis.ANALYSIS_CSV_HEADER]
    for path in args.paths:
        scores = steganalysis.analyze(load_image(path), args.threshold)
        lines.append(steganalysis.analysis_csv_row(path.name, scores))
    text = "\n".join(lines) + "\n"
    if args.csv is not None:
        args.csv.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_quality(args) -> int:
    cover = load_image(args.cover)
    stego = load_image(args.stego)
    text = (
        metrics.QUALITY_CSV_HEADER
        + "\n"
        + metrics.quality_csv_row(args.cover.name, args.stego.name, cover, stego)
        + "\n"
    )
    if args.csv is not None:
        args.csv.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_waveform(args) -> int:
    grid = load_image(args.image)
    digits = metrics.waveform(grid, args.channel)
    args.out.write_text("\n".join(str(d) for d in digits) + "\n")
    print(f"wrote {digits.size} samples -> {args.out}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    flt = None if args.ssim_filter < 0 else args.ssim_filter
    config = CorpusConfig(
        cover_dir=args.cover_dir,
        output_dir=args.out_dir,
        message=args.message.read_bytes(),
        key=args.key,
        ssim_filter=flt,
        threshold=args.threshold,
        overlay=not args.no_overlay,
        workers=args.workers,
    )
    summary = harness.run_corpus(config)
    csv_path = args.csv if args.csv is not None else args.out_dir / "results.csv"
    csv_path.write_text(harness.results_csv(summary))
    args.report.write_text(harness.summary_report(summary))
    sys.stdout.write(harness.summary_report(summary))
    return EXIT_OK


def _cmd_features(args) -> int:
    count = harness.export_features(args.dir, args.csv)
    print(f"wrote {count} rows -> {args.csv}")
    return EXIT_OK


_COMMANDS = {
    "embed": _cmd_embed,
    "extract": _cmd_extract,
    "analyze": _cmd_analyze,
    "quality": _cmd_quality,
    "waveform": _cmd_waveform,
    "bench": _cmd_bench,
    "features": _cmd_features,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except StegoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
