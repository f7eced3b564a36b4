"""Pixel rasters, a minimal 24-bpp BMP codec, and bit-level image comparison.

Only the BMP flavour produced by common tools for raw RGB data is handled:
"BM" magic, 40-byte BITMAPINFOHEADER, 24 bits per pixel, no compression.
Rows are stored bottom-up unless the header height is negative, each row
padded to a 4-byte boundary.  That is enough to round-trip every frame this
project cares about without pulling in an imaging library.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

HEADER_SIZE = 54  # 14-byte file header + 40-byte BITMAPINFOHEADER


class BadMagicError(ValueError):
    """First two bytes of the file are not 'BM'."""


class UnsupportedFormatError(ValueError):
    """Structurally a BMP, but not the 24-bpp uncompressed flavour."""


class TruncatedError(ValueError):
    """File ends before the header or the promised pixel array does."""


class DimensionMismatchError(ValueError):
    """Two images were compared that do not share a geometry."""


@dataclass
class RgbImage:
    """Row-major, top-to-bottom raster of (r, g, b) byte triples."""

    width: int
    height: int
    pixels: list  # [(r, g, b)] with len == width * height

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be positive")
        if len(self.pixels) != self.width * self.height:
            raise ValueError(
                f"expected {self.width * self.height} pixels, got {len(self.pixels)}"
            )


@dataclass
class GrayImage:
    """Row-major, top-to-bottom raster of 8-bit intensities."""

    width: int
    height: int
    pixels: list  # [int] with len == width * height

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be positive")
        if len(self.pixels) != self.width * self.height:
            raise ValueError(
                f"expected {self.width * self.height} pixels, got {len(self.pixels)}"
            )


def row_stride(width: int) -> int:
    """Bytes per stored BMP row: 3*width rounded up to a multiple of 4."""
    return (3 * width + 3) & ~3


def read_bmp(data: bytes) -> RgbImage:
    """Decode a 24-bpp uncompressed BMP into an RgbImage.

    Raises BadMagicError, UnsupportedFormatError or TruncatedError.  A
    negative header height (top-down row order) is accepted and normalised;
    the returned raster is always top-to-bottom.
    """
    if len(data) < 2:
        raise BadMagicError("file too short to hold a BMP magic")
    if data[:2] != b"BM":
        raise BadMagicError(f"bad magic {data[:2]!r}")
    if len(data) < HEADER_SIZE:
        raise TruncatedError(f"header needs {HEADER_SIZE} bytes, file has {len(data)}")

    pixel_offset = struct.unpack_from("<I", data, 10)[0]
    info_size, width, height = struct.unpack_from("<Iii", data, 14)
    planes, bpp = struct.unpack_from("<HH", data, 26)
    compression = struct.unpack_from("<I", data, 30)[0]

    if info_size != 40:
        raise UnsupportedFormatError(f"unsupported info header size {info_size}")
    if planes != 1:
        raise UnsupportedFormatError(f"unsupported plane count {planes}")
    if bpp != 24:
        raise UnsupportedFormatError(f"unsupported bit depth {bpp}")
    if compression != 0:
        raise UnsupportedFormatError(f"unsupported compression {compression}")
    if width <= 0 or height == 0:
        raise UnsupportedFormatError(f"bad dimensions {width}x{height}")

    rows = abs(height)
    stride = row_stride(width)
    if pixel_offset + stride * rows > len(data):
        raise TruncatedError(
            f"pixel array needs {stride * rows} bytes at offset {pixel_offset}, "
            f"file has {len(data)}"
        )

    pixels = []
    for y in range(rows):
        # positive height means the file stores the bottom row first
        src_row = rows - 1 - y if height > 0 else y
        base = pixel_offset + src_row * stride
        row = data[base : base + 3 * width]
        for x in range(0, 3 * width, 3):
            pixels.append((row[x + 2], row[x + 1], row[x]))  # stored as BGR
    return RgbImage(width, rows, pixels)


def write_bmp(image: RgbImage) -> bytes:
    """Encode an RgbImage as a bottom-up 24-bpp uncompressed BMP."""
    stride = row_stride(image.width)
    image_size = stride * image.height
    header = struct.pack(
        "<2sIHHI", b"BM", HEADER_SIZE + image_size, 0, 0, HEADER_SIZE
    ) + struct.pack(
        "<IiiHHIIiiII",
        40,
        image.width,
        image.height,
        1,
        24,
        0,
        image_size,
        2835,  # 72 DPI, the conventional filler
        2835,
        0,
        0,
    )
    pad = b"\x00" * (stride - 3 * image.width)
    out = bytearray(header)
    for y in reversed(range(image.height)):
        row = bytearray()
        for r, g, b in image.pixels[y * image.width : (y + 1) * image.width]:
            row.append(b)
            row.append(g)
            row.append(r)
        out += row + pad
    return bytes(out)


def gray_to_rgb(image: GrayImage) -> RgbImage:
    """Replicate each intensity into an (v, v, v) triple."""
    return RgbImage(image.width, image.height, [(v, v, v) for v in image.pixels])


def hamming_distance(a: RgbImage, b: RgbImage) -> int:
    """Number of differing bits between the channel bytes of two rasters.

    Both images are flattened to their r, g, b byte sequence in raster order
    and compared bitwise.  Raises DimensionMismatchError if the geometries
    differ.
    """
    if (a.width, a.height) != (b.width, b.height):
        raise DimensionMismatchError(
            f"{a.width}x{a.height} vs {b.width}x{b.height}"
        )
    flat_a = bytes(ch for px in a.pixels for ch in px)
    flat_b = bytes(ch for px in b.pixels for ch in px)
    return (int.from_bytes(flat_a, "big") ^ int.from_bytes(flat_b, "big")).bit_count()
