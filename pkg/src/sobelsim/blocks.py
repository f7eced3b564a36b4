"""Streaming processing elements for the edge-detection pipeline.

Three blocks cover the datapath: an RGB-to-grayscale converter, a Sobel
gradient-magnitude core, and a byte-to-word packer.  The Sobel core exists
in two structurally different versions that must produce byte-identical
streams:

* SobelHdlPE keeps the previous two rows in two line-buffer RAMs and runs a
  hand-built four-stage pipeline (accept + buffer reads, window shift +
  buffer writeback, convolution + magnitude, emit).  Which RAM holds which
  row rotates with the row parity, so each RAM sees at most one read and
  one write per cycle.

* SobelHlsPE stacks three line buffers and rotates them vertically at the
  written column before storing each arriving pixel, the way a pipelined
  high-level-synthesis loop is usually scheduled.  All of the work happens
  when a pixel is accepted; results then ride a configurable register chain
  (default six stages) to the output.

Both cores emit one beat per input pixel in raster order.  The frame edge
uses a zero border: output geometry equals input geometry and every pixel
whose 3x3 window would leave the frame is 0.  Because an interior result
for raster position k becomes computable exactly when input k + width + 1
arrives, each core emits position k alongside that input and drains the
final width + 1 border zeros after the frame ends.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .image_io import GrayImage, RgbImage
from .stream import Beat, ProcessingElement, ProtocolError


class ConfigMismatchError(RuntimeError):
    """The incoming frame does not match the configured geometry."""


class WidthTooLargeError(ValueError):
    """Configured image width exceeds the line-buffer depth."""


# ---- convolution primitives ------------------------------------------


class GradientPair(NamedTuple):
    """Signed horizontal/vertical gradients; each within +/-1020 for 8-bit input."""

    gh: int
    gv: int


@dataclass(frozen=True)
class SobelMasks:
    """A 3x3 mask pair; mv is the transpose of mh for the Sobel operator."""

    mh: tuple
    mv: tuple


SOBEL_MASKS = SobelMasks(
    mh=((-1, 0, 1), (-2, 0, 2), (-1, 0, 1)),
    mv=((-1, -2, -1), (0, 0, 0), (1, 2, 1)),
)


class Window3x3:
    """3x3 pixel window held as three 3-deep shift rows.

    rows[0] is the oldest image row of the window (top).  Within a row,
    index 0 holds the newest column, so the leftmost image column of the
    window lives at index 2.  shift_in() models the per-pixel register
    shift: every row moves one step and the fresh column enters at index 0.
    """

    __slots__ = ("rows",)

    def __init__(self):
        self.rows = [[0, 0, 0], [0, 0, 0], [0, 0, 0]]

    def shift_in(self, top: int, mid: int, bot: int):
        for row, v in zip(self.rows, (top, mid, bot)):
            row[2] = row[1]
            row[1] = row[0]
            row[0] = v

    def snapshot(self) -> "Window3x3":
        """Copy the current register values (the live window keeps shifting)."""
        w = Window3x3.__new__(Window3x3)
        w.rows = [row[:] for row in self.rows]
        return w

    @classmethod
    def from_grid(cls, grid) -> "Window3x3":
        """Build a window from image-layout rows (index 0 = leftmost column)."""
        w = cls()
        for row, g in zip(w.rows, grid):
            row[0], row[1], row[2] = g[2], g[1], g[0]
        return w

    def grid(self):
        """Return the window in image layout (row-major, leftmost first)."""
        return [[row[2 - j] for j in range(3)] for row in self.rows]

    def reset(self):
        for row in self.rows:
            row[0] = row[1] = row[2] = 0


class LineBuffer:
    """One row of pixels modelled as a dual-port RAM.

    The discipline check mirrors the physical part: at most one read and
    one write per simulated cycle, re-armed by begin_cycle().
    """

    __slots__ = ("depth", "cells", "_reads", "_writes")

    def __init__(self, depth: int):
        if depth < 3:
            raise ValueError("line buffer depth must be at least 3")
        self.depth = depth
        self.cells = bytearray(depth)
        self._reads = 0
        self._writes = 0

    def begin_cycle(self):
        self._reads = 0
        self._writes = 0

    def read(self, col: int) -> int:
        self._reads += 1
        if self._reads > 1:
            raise ProtocolError("second read on a single-read-port line buffer")
        return self.cells[col]

    def write(self, col: int, value: int):
        self._writes += 1
        if self._writes > 1:
            raise ProtocolError("second write on a single-write-port line buffer")
        self.cells[col] = value

    def reset(self):
        self.cells = bytearray(self.depth)
        self._reads = 0
        self._writes = 0


def convolve3x3(window: Window3x3, masks: SobelMasks = SOBEL_MASKS) -> GradientPair:
    """Correlate a window with a mask pair, in image orientation."""
    gh = 0
    gv = 0
    rows = window.rows
    for i in range(3):
        cells = rows[i]
        mh_row = masks.mh[i]
        mv_row = masks.mv[i]
        for j in range(3):
            v = cells[2 - j]
            gh += v * mh_row[j]
            gv += v * mv_row[j]
    return GradientPair(gh, gv)


def magnitude(g: GradientPair, mode: str = "approx") -> int:
    """Gradient magnitude saturated to 8 bits.

    "approx" is |gh| + |gv|; "exact" is the Euclidean magnitude rounded
    half away from zero.  Both clamp at 255.
    """
    if mode == "approx":
        mag = abs(g.gh) + abs(g.gv)
    elif mode == "exact":
        mag = int(math.sqrt(g.gh * g.gh + g.gv * g.gv) + 0.5)
    else:
        raise ValueError(f"unknown magnitude mode {mode!r}")
    return 255 if mag > 255 else mag


# ---- configuration -----------------------------------------------------


@dataclass(frozen=True)
class SobelConfig:
    """Geometry and mode shared by both Sobel cores.

    line_buffer_depth is the size the row RAMs are carved out at; frames
    wider than that cannot be buffered, whatever the variant.
    """

    width: int
    height: int
    magnitude_mode: str = "approx"
    border_policy: str = "zero"
    line_buffer_depth: int = 1920

    def __post_init__(self):
        if self.width < 3 or self.height < 3:
            raise ValueError("frame must be at least 3x3")
        if self.magnitude_mode not in ("approx", "exact"):
            raise ValueError(f"unknown magnitude mode {self.magnitude_mode!r}")
        if self.border_policy != "zero":
            raise ValueError("only the zero border policy is implemented")
        if self.width > self.line_buffer_depth:
            raise WidthTooLargeError(
                f"width {self.width} exceeds line-buffer depth {self.line_buffer_depth}"
            )


# ---- processing elements ------------------------------------------------


class Rgb2GrayPE(ProcessingElement):
    """Truncating mean of the three channels, one registered stage."""

    name = "rgb2gray"
    in_width = 24
    out_width = 8

    def __init__(self):
        self._reg: Optional[Beat] = None

    def reset(self):
        self._reg = None

    def tick(self, pin, pout):
        reg = self._reg
        if reg is not None:
            if not pout.free:
                return  # hold the register, accept nothing
            pout.put(reg)
        beat = pin.head
        if beat is not None:
            word, last = pin.take()
            gray = (((word >> 16) & 0xFF) + ((word >> 8) & 0xFF) + (word & 0xFF)) // 3
            self._reg = Beat(gray, last)
        else:
            self._reg = None


class U8ToU32PE(ProcessingElement):
    """Pack four consecutive bytes into one 32-bit word, first byte lowest.

    A frame whose length is not a multiple of four ends in a short word
    zero-padded in its unused high bytes.  The packed word is registered,
    so it appears on the output one cycle after its final byte arrived.
    """

    name = "u8_to_u32"
    in_width = 8
    out_width = 32

    def __init__(self):
        self._acc = 0
        self._count = 0
        self._reg: Optional[Beat] = None

    def reset(self):
        self._acc = 0
        self._count = 0
        self._reg = None

    def tick(self, pin, pout):
        reg = self._reg
        if reg is not None:
            if not pout.free:
                return
            pout.put(reg)
            self._reg = None
        beat = pin.head
        if beat is not None:
            data, last = pin.take()
            self._acc |= data << (8 * self._count)
            self._count += 1
            if self._count == 4 or last:
                self._reg = Beat(self._acc, last)
                self._acc = 0
                self._count = 0


class SobelHdlPE(ProcessingElement):
    """Sobel core with two line buffers and a four-stage manual pipeline.

    Stage 1 accepts a pixel and reads both row RAMs at its column; stage 2
    shifts the window and writes the pixel back over the oldest row (the
    RAM roles rotate with row parity); stage 3 convolves and applies the
    magnitude; stage 4 emits.  One pixel enters and one beat leaves per
    cycle once warmed up; a full downstream channel freezes all four stages.

    Assign a list to `trace` to record events as (kind, cycle, ...):
    ("accept", t, index), ("convolve", t, row, col) for the window centre,
    and ("emit", t, position).
    """

    name = "sobel_hdl"
    in_width = 8
    out_width = 8
    stage_count = 4

    def __init__(self, config: SobelConfig):
        self.config = config
        self.trace: Optional[list] = None
        self._w = config.width
        self._mode = config.magnitude_mode
        self._total = config.width * config.height
        self._drain_start = self._total - config.width - 1
        self._lb = (
            LineBuffer(config.line_buffer_depth),
            LineBuffer(config.line_buffer_depth),
        )
        self._window = Window3x3()
        self.reset()

    def reset(self):
        self._in_idx = 0
        self._drain_pos = self._drain_start
        self._s1 = None  # (out_pos, pixel, row, col, above2, above1); pixel None = drain
        self._s2 = None  # (out_pos, window snapshot or None)
        self._s3 = None  # (out_pos, value, last)
        self._tick = -1
        self._lb[0].reset()
        self._lb[1].reset()
        self._window.reset()
        if self.trace is not None:
            self.trace.clear()

    def tick(self, pin, pout):
        self._tick += 1
        trace = self.trace

        # stage 4: emit the registered result; a blocked emit freezes the pipe
        s3 = self._s3
        if s3 is not None and s3[0] >= 0:
            if not pout.free:
                return
            pout.put(Beat(s3[1], s3[2]))
            if trace is not None:
                trace.append(("emit", self._tick, s3[0]))

        lb0, lb1 = self._lb
        lb0.begin_cycle()
        lb1.begin_cycle()

        # stage 3: convolve the captured window
        s2 = self._s2
        if s2 is None:
            self._s3 = None
        else:
            out_pos, win = s2
            if win is None:
                value = 0
            else:
                value = magnitude(convolve3x3(win), self._mode)
                if trace is not None:
                    trace.append(
                        ("convolve", self._tick, out_pos // self._w, out_pos % self._w)
                    )
            self._s3 = (out_pos, value, out_pos == self._total - 1)

        # stage 2: shift the window, write the pixel over the oldest row
        s1 = self._s1
        if s1 is None:
            self._s2 = None
        else:
            out_pos, pixel, row, col, above2, above1 = s1
            if pixel is None:
                self._s2 = (out_pos, None)
            else:
                window = self._window
                window.shift_in(above2, above1, pixel)
                self._lb[row & 1].write(col, pixel)
                if row >= 2 and col >= 2:
                    # window now covers rows row-2..row, cols col-2..col,
                    # i.e. the interior centre that out_pos points at
                    self._s2 = (out_pos, window.snapshot())
                else:
                    self._s2 = (out_pos, None)

        # stage 1: accept a pixel (reading both row RAMs) or inject a drain token
        if self._in_idx < self._total:
            beat = pin.head
            if beat is None:
                self._s1 = None
            else:
                data, last = pin.take()
                idx = self._in_idx
                if last != (idx == self._total - 1):
                    raise ConfigMismatchError(
                        f"frame length does not match {self.config.width}x"
                        f"{self.config.height} (last flag at beat {idx})"
                    )
                row, col = divmod(idx, self._w)
                above2 = self._lb[row & 1].read(col)  # row-2, overwritten next stage
                above1 = self._lb[(row + 1) & 1].read(col)  # row-1
                self._s1 = (idx - self._w - 1, data, row, col, above2, above1)
                self._in_idx = idx + 1
                if trace is not None:
                    trace.append(("accept", self._tick, idx))
        elif self._drain_pos < self._total:
            self._s1 = (self._drain_pos, None, 0, 0, 0, 0)
            self._drain_pos += 1
        else:
            self._s1 = None


class SobelHlsPE(ProcessingElement):
    """Sobel core with three vertically rotating line buffers.

    Accepting pixel (row, col) rotates the column: top[col] takes mid[col],
    mid[col] takes bot[col], bot[col] stores the new pixel; the displaced
    values feed the sliding window, and once the two upper buffers are full
    and three pixels of the current row have arrived (2*width + 3 pixels in
    total) the window is convolved.  The finished value then travels a
    register chain of pipeline_depth stages to the output, standing in for
    whatever schedule a synthesis tool would have produced; the depth never
    changes the emitted bytes.

    Assign a list to `trace` to record ("accept", t, index),
    ("fill", t, pixels_accepted) once, ("convolve", t, row, col) and
    ("emit", t, position) events.
    """

    name = "sobel_hls"
    in_width = 8
    out_width = 8

    def __init__(self, config: SobelConfig, pipeline_depth: int = 6):
        if pipeline_depth < 2:
            raise ValueError("pipeline depth must be at least 2")
        self.config = config
        self.pipeline_depth = pipeline_depth
        self.stage_count = pipeline_depth
        self.trace: Optional[list] = None
        self._w = config.width
        self._mode = config.magnitude_mode
        self._total = config.width * config.height
        self._drain_start = self._total - config.width - 1
        self._lb_top = LineBuffer(config.line_buffer_depth)
        self._lb_mid = LineBuffer(config.line_buffer_depth)
        self._lb_bot = LineBuffer(config.line_buffer_depth)
        self._window = Window3x3()
        self.reset()

    def reset(self):
        self._in_idx = 0
        self._drain_pos = self._drain_start
        self._chain = [None] * (self.pipeline_depth - 1)  # [0] newest, [-1] emitting
        self._filled = False
        self._tick = -1
        self._lb_top.reset()
        self._lb_mid.reset()
        self._lb_bot.reset()
        self._window.reset()
        if self.trace is not None:
            self.trace.clear()

    def tick(self, pin, pout):
        self._tick += 1
        trace = self.trace
        chain = self._chain

        # emit the chain tail; a blocked emit freezes the whole loop
        tail = chain[-1]
        if tail is not None and tail[0] >= 0:
            if not pout.free:
                return
            pout.put(Beat(tail[1], tail[2]))
            if trace is not None:
                trace.append(("emit", self._tick, tail[0]))

        self._lb_top.begin_cycle()
        self._lb_mid.begin_cycle()
        self._lb_bot.begin_cycle()

        # one loop iteration: rotate buffers, shift window, convolve
        token = None
        if self._in_idx < self._total:
            beat = pin.head
            if beat is not None:
                pixel, last = pin.take()
                idx = self._in_idx
                if last != (idx == self._total - 1):
                    raise ConfigMismatchError(
                        f"frame length does not match {self.config.width}x"
                        f"{self.config.height} (last flag at beat {idx})"
                    )
                row, col = divmod(idx, self._w)
                mid_old = self._lb_mid.read(col)
                bot_old = self._lb_bot.read(col)
                self._lb_top.write(col, mid_old)
                self._lb_mid.write(col, bot_old)
                self._lb_bot.write(col, pixel)
                window = self._window
                window.shift_in(mid_old, bot_old, pixel)
                self._in_idx = idx + 1
                if trace is not None:
                    trace.append(("accept", self._tick, idx))
                if row >= 2 and col >= 2:
                    if not self._filled:
                        self._filled = True
                        if trace is not None:
                            trace.append(("fill", self._tick, idx + 1))
                    value = magnitude(convolve3x3(window), self._mode)
                    if trace is not None:
                        trace.append(("convolve", self._tick, row - 1, col - 1))
                else:
                    value = 0
                out_pos = idx - self._w - 1
                token = (out_pos, value, out_pos == self._total - 1)
        elif self._drain_pos < self._total:
            token = (self._drain_pos, 0, self._drain_pos == self._total - 1)
            self._drain_pos += 1

        del chain[-1]
        chain.insert(0, token)


# ---- factories ----------------------------------------------------------


def rgb2gray_pe() -> Rgb2GrayPE:
    return Rgb2GrayPE()


def u8_to_u32_pe() -> U8ToU32PE:
    return U8ToU32PE()


def sobel_hdl_pe(config: SobelConfig) -> SobelHdlPE:
    return SobelHdlPE(config)


def sobel_hls_pe(config: SobelConfig, pipeline_depth: int = 6) -> SobelHlsPE:
    return SobelHlsPE(config, pipeline_depth)


def sobel_pe(variant: str, config: SobelConfig, pipeline_depth: int = 6):
    """Build either Sobel core by its variant tag ("hdl" or "hls")."""
    if variant == "hdl":
        return SobelHdlPE(config)
    if variant == "hls":
        return SobelHlsPE(config, pipeline_depth)
    raise ValueError(f"unknown variant {variant!r}")


# ---- frame packing helpers ----------------------------------------------


def rgb_frame(image: RgbImage) -> list:
    """Flatten an RgbImage into 24-bit beats, (r << 16) | (g << 8) | b."""
    n = len(image.pixels)
    return [
        Beat((r << 16) | (g << 8) | b, i == n - 1)
        for i, (r, g, b) in enumerate(image.pixels)
    ]


def gray_frame(image: GrayImage) -> list:
    """Flatten a GrayImage into 8-bit beats."""
    n = len(image.pixels)
    return [Beat(v, i == n - 1) for i, v in enumerate(image.pixels)]


def gray_image_from_beats(beats, width: int, height: int) -> GrayImage:
    """Reassemble 8-bit beats into a GrayImage."""
    return GrayImage(width, height, [b.data for b in beats])


def unpack_words(beats, byte_count: int) -> list:
    """Unpack 32-bit word beats back into their first byte_count bytes."""
    out = []
    for beat in beats:
        word = beat.data
        out.append(word & 0xFF)
        out.append((word >> 8) & 0xFF)
        out.append((word >> 16) & 0xFF)
        out.append((word >> 24) & 0xFF)
    if byte_count > len(out):
        raise ValueError(f"{len(beats)} words hold fewer than {byte_count} bytes")
    if any(out[byte_count:]):
        raise ValueError("padding bytes beyond the frame end must be zero")
    return out[:byte_count]
