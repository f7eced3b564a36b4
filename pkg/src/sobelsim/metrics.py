"""Resource estimates and machine-readable run reports.

The resource model counts only what follows directly from the structure of
each core: row RAMs, their words, the 3x3 window registers and the pipeline
stage registers.  Device-mapping details (mux trees, control FFs, tool
packing) are out of scope, as are wall-clock milliseconds; timing lives
entirely in cycle counts.

Both serialization schemas are frozen.  JSON::

    {"input": {"width", "height", "magnitude_mode", "stall_prob", "seed"},
     "hdl": {"total_cycles", "first_output_cycle", "stall_cycles",
             "resources": {"rams", "ram_words", "window_regs", "stage_regs"}},
     "hls": {...},
     "hamming_bits": ...,
     "cycle_ratio": ...}

CSV: a header row ``variant,total_cycles,first_output_cycle,stall_cycles,
rams,ram_words,window_regs,stage_regs`` followed by exactly one hdl row and
one hls row; the summary fields live in the JSON form only.  Ratios are
reported with four decimal places.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .image_io import RgbImage, hamming_distance
from .stream import CycleStats

CSV_HEADER = (
    "variant,total_cycles,first_output_cycle,stall_cycles,"
    "rams,ram_words,window_regs,stage_regs"
)


@dataclass(frozen=True)
class ResourceEstimate:
    line_buffer_rams: int
    line_buffer_words: int
    window_registers: int
    pipeline_registers: int


@dataclass(frozen=True)
class ComparisonReport:
    """Everything one frame's run of both cores produced, side by side."""

    width: int
    height: int
    magnitude_mode: str
    stall_prob: float
    seed: int
    hdl_stats: CycleStats
    hls_stats: CycleStats
    hdl_resources: ResourceEstimate
    hls_resources: ResourceEstimate
    hamming_bits: int
    cycle_ratio: float


def estimate_resources(variant: str, width: int, pipeline_depth: int = 6) -> ResourceEstimate:
    """Structural resource counts for one core at a given frame width.

    The hdl core always holds two row RAMs and four stage registers; the
    hls core holds three row RAMs and one register per pipeline stage.
    Both keep the 3x3 window in nine registers.  RAM words scale with the
    frame width actually configured.
    """
    if width < 3:
        raise ValueError("width must be at least 3")
    if variant == "hdl":
        return ResourceEstimate(2, 2 * width, 9, 4)
    if variant == "hls":
        if pipeline_depth < 2:
            raise ValueError("pipeline depth must be at least 2")
        return ResourceEstimate(3, 3 * width, 9, pipeline_depth)
    raise ValueError(f"unknown variant {variant!r}")


def build_report(
    hdl_stats: CycleStats,
    hls_stats: CycleStats,
    hdl_resources: ResourceEstimate,
    hls_resources: ResourceEstimate,
    hdl_image: RgbImage,
    hls_image: RgbImage,
    magnitude_mode: str = "approx",
    stall_prob: float = 0.0,
    seed: int = 0,
) -> ComparisonReport:
    """Combine two runs of the same frame into one report.

    Raises DimensionMismatchError if the two output images disagree on
    geometry; hamming_bits is their bit-level distance and cycle_ratio is
    hls cycles over hdl cycles.
    """
    bits = hamming_distance(hdl_image, hls_image)
    return ComparisonReport(
        width=hdl_image.width,
        height=hdl_image.height,
        magnitude_mode=magnitude_mode,
        stall_prob=stall_prob,
        seed=seed,
        hdl_stats=hdl_stats,
        hls_stats=hls_stats,
        hdl_resources=hdl_resources,
        hls_resources=hls_resources,
        hamming_bits=bits,
        cycle_ratio=hls_stats.total_cycles / hdl_stats.total_cycles,
    )


def variant_summary(stats: CycleStats, resources: ResourceEstimate) -> dict:
    """The per-variant JSON block, shared by every report flavour."""
    return {
        "total_cycles": stats.total_cycles,
        "first_output_cycle": stats.first_output_cycle,
        "stall_cycles": stats.sink_stall_cycles,
        "resources": {
            "rams": resources.line_buffer_rams,
            "ram_words": resources.line_buffer_words,
            "window_regs": resources.window_registers,
            "stage_regs": resources.pipeline_registers,
        },
    }


def serialize_report(report: ComparisonReport, fmt: str = "json") -> bytes:
    """Render a report in one of the frozen schemas ("json" or "csv")."""
    if fmt == "json":
        payload = {
            "input": {
                "width": report.width,
                "height": report.height,
                "magnitude_mode": report.magnitude_mode,
                "stall_prob": report.stall_prob,
                "seed": report.seed,
            },
            "hdl": variant_summary(report.hdl_stats, report.hdl_resources),
            "hls": variant_summary(report.hls_stats, report.hls_resources),
            "hamming_bits": report.hamming_bits,
            "cycle_ratio": round(report.cycle_ratio, 4),
        }
        return (json.dumps(payload, indent=2) + "\n").encode()
    if fmt == "csv":
        lines = [CSV_HEADER]
        for variant, stats, res in (
            ("hdl", report.hdl_stats, report.hdl_resources),
            ("hls", report.hls_stats, report.hls_resources),
        ):
            lines.append(
                f"{variant},{stats.total_cycles},{stats.first_output_cycle},"
                f"{stats.sink_stall_cycles},{res.line_buffer_rams},"
                f"{res.line_buffer_words},{res.window_registers},"
                f"{res.pipeline_registers}"
            )
        return ("\n".join(lines) + "\n").encode()
    raise ValueError(f"unknown report format {fmt!r}")
