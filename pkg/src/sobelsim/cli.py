"""Command-line front end for the streaming edge-detection simulator.

Three commands:

* ``process``  -- run one core over a BMP and write the edge image.
* ``compare``  -- run both cores over the same BMP, write both edge images
  and a comparison report; exits 3 if the outputs differ by even one bit.
* ``bench``    -- sweep sink stall probabilities {0, 0.25, 0.5} over a
  seeded synthetic frame and write per-run cycle statistics as CSV.

Exit codes: 0 success (and, for compare, bit-identical outputs); 1 usage,
file or configuration problems; 2 simulated deadlock; 3 output mismatch.
Diagnostics go to stderr; data only ever goes to files.
"""

from __future__ import annotations

import argparse
import random
import sys

from .blocks import (
    SobelConfig,
    WidthTooLargeError,
    rgb2gray_pe,
    rgb_frame,
    sobel_pe,
    u8_to_u32_pe,
    unpack_words,
)
from .image_io import (
    BadMagicError,
    DimensionMismatchError,
    GrayImage,
    RgbImage,
    TruncatedError,
    UnsupportedFormatError,
    gray_to_rgb,
    read_bmp,
    write_bmp,
)
from .metrics import (
    build_report,
    estimate_resources,
    serialize_report,
    variant_summary,
)
from .stream import DeadlockError, StallModel, build_pipeline, run_frame

BENCH_STALL_PROBS = (0.0, 0.25, 0.5)
BENCH_CSV_HEADER = (
    "variant,stall_prob,seed,total_cycles,first_output_cycle,"
    "output_beats,stall_cycles"
)


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors, which this tool
    # reserves for simulated deadlocks; remap to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_model_flags(sub):
    sub.add_argument("--magnitude", choices=("approx", "exact"), default="approx",
                     help="gradient magnitude mode (default: approx)")
    sub.add_argument("--stall-prob", type=float, default=0.0, metavar="P",
                     help="sink stall probability per cycle (default: 0)")
    sub.add_argument("--seed", type=int, default=0,
                     help="seed for the stall model (default: 0)")
    sub.add_argument("--line-buffer-depth", type=int, default=1920, metavar="N",
                     help="row RAM depth in pixels (default: 1920)")
    sub.add_argument("--hls-depth", type=int, default=6, metavar="N",
                     help="hls core pipeline depth (default: 6)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sobelsim",
                     description="cycle-level streaming Sobel core simulator")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("process", parents=[], help="run one core over a BMP")
    p.add_argument("--arch", choices=("hdl", "hls"), default="hdl",
                   help="which core to simulate (default: hdl)")
    p.add_argument("--input", required=True, help="24-bpp BMP to read")
    p.add_argument("--output", required=True, help="edge-image BMP to write")
    p.add_argument("--report", help="optional JSON run summary")
    _add_model_flags(p)
    p.set_defaults(func=cmd_process)

    c = commands.add_parser("compare", help="run both cores and compare outputs")
    c.add_argument("--input", required=True, help="24-bpp BMP to read")
    c.add_argument("--output", required=True,
                   help="base path for the two edge BMPs (suffixed _hdl/_hls)")
    c.add_argument("--report", required=True, help="comparison report to write")
    c.add_argument("--format", choices=("json", "csv"), default="json",
                   help="report flavour (default: json)")
    _add_model_flags(c)
    c.set_defaults(func=cmd_compare)

    b = commands.add_parser("bench", help="stall-probability sweep on a synthetic frame")
    b.add_argument("--width", type=int, required=True, help="frame width in pixels")
    b.add_argument("--height", type=int, required=True, help="frame height in pixels")
    b.add_argument("--seed", type=int, required=True,
                   help="seed for the frame contents and the stall models")
    b.add_argument("--report", required=True, help="CSV of per-run cycle stats")
    b.add_argument("--magnitude", choices=("approx", "exact"), default="approx")
    b.add_argument("--line-buffer-depth", type=int, default=1920, metavar="N")
    b.add_argument("--hls-depth", type=int, default=6, metavar="N")
    b.set_defaults(func=cmd_bench)

    return parser


def _load_image(path: str) -> RgbImage:
    with open(path, "rb") as fh:
        return read_bmp(fh.read())


def _run_variant(variant, image, args):
    """Simulate one core over an image; returns (gray output, stats)."""
    config = SobelConfig(
        image.width,
        image.height,
        magnitude_mode=args.magnitude,
        line_buffer_depth=args.line_buffer_depth,
    )
    pipeline = build_pipeline(
        [rgb2gray_pe(), sobel_pe(variant, config, args.hls_depth), u8_to_u32_pe()]
    )
    stalls = StallModel(args.stall_prob, args.seed)
    words, stats = run_frame(pipeline, rgb_frame(image), stalls)
    pixels = unpack_words(words, image.width * image.height)
    return GrayImage(image.width, image.height, pixels), stats


def cmd_process(args) -> int:
    image = _load_image(args.input)
    gray, stats = _run_variant(args.arch, image, args)
    with open(args.output, "wb") as fh:
        fh.write(write_bmp(gray_to_rgb(gray)))
    if args.report:
        import json

        resources = estimate_resources(args.arch, image.width, args.hls_depth)
        payload = {
            "input": {
                "width": image.width,
                "height": image.height,
                "magnitude_mode": args.magnitude,
                "stall_prob": args.stall_prob,
                "seed": args.seed,
            },
            args.arch: variant_summary(stats, resources),
        }
        with open(args.report, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
    print(f"{args.arch}: {stats.total_cycles} cycles for "
          f"{image.width}x{image.height}", file=sys.stderr)
    return 0


def cmd_compare(args) -> int:
    image = _load_image(args.input)
    hdl_gray, hdl_stats = _run_variant("hdl", image, args)
    hls_gray, hls_stats = _run_variant("hls", image, args)
    report = build_report(
        hdl_stats,
        hls_stats,
        estimate_resources("hdl", image.width),
        estimate_resources("hls", image.width, args.hls_depth),
        gray_to_rgb(hdl_gray),
        gray_to_rgb(hls_gray),
        magnitude_mode=args.magnitude,
        stall_prob=args.stall_prob,
        seed=args.seed,
    )
    with open(args.report, "wb") as fh:
        fh.write(serialize_report(report, args.format))
    base, dot, ext = args.output.rpartition(".")
    if not dot:
        base, ext = args.output, "bmp"
    for tag, gray in (("hdl", hdl_gray), ("hls", hls_gray)):
        with open(f"{base}_{tag}.{ext}", "wb") as fh:
            fh.write(write_bmp(gray_to_rgb(gray)))
    print(f"hamming_bits={report.hamming_bits} "
          f"cycle_ratio={report.cycle_ratio:.4f}", file=sys.stderr)
    return 0 if report.hamming_bits == 0 else 3


def cmd_bench(args) -> int:
    rng = random.Random(args.seed)
    pixels = [(rng.randrange(256), rng.randrange(256), rng.randrange(256))
              for _ in range(args.width * args.height)]
    image = RgbImage(args.width, args.height, pixels)
    frame = rgb_frame(image)

    config = SobelConfig(
        image.width,
        image.height,
        magnitude_mode=args.magnitude,
        line_buffer_depth=args.line_buffer_depth,
    )
    lines = [BENCH_CSV_HEADER]
    for variant in ("hdl", "hls"):
        pipeline = build_pipeline(
            [rgb2gray_pe(), sobel_pe(variant, config, args.hls_depth), u8_to_u32_pe()]
        )
        baseline = None
        for prob in BENCH_STALL_PROBS:
            beats, stats = run_frame(pipeline, frame, StallModel(prob, args.seed))
            if baseline is None:
                baseline = beats
            elif beats != baseline:
                print(f"{variant}: output changed under stall probability "
                      f"{prob}", file=sys.stderr)
                return 3
            lines.append(
                f"{variant},{prob:.4f},{args.seed},{stats.total_cycles},"
                f"{stats.first_output_cycle},{stats.output_beats},"
                f"{stats.sink_stall_cycles}"
            )
    with open(args.report, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"bench: {len(lines) - 1} runs of {args.width}x{args.height}",
          file=sys.stderr)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except DeadlockError as exc:
        print(f"sobelsim: deadlock: {exc}", file=sys.stderr)
        return 2
    except (BadMagicError, UnsupportedFormatError, TruncatedError,
            DimensionMismatchError, WidthTooLargeError, ValueError) as exc:
        print(f"sobelsim: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"sobelsim: error: {exc}", file=sys.stderr)
        return 1


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    entrypoint()
