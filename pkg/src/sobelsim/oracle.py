"""Frame-level reference implementations of the edge-detection datapath.

These are deliberately naive whole-frame loops with the mask coefficients
written out literally.  They share no code with the streaming cores, so a
match between the two is evidence that the cycle-level machinery is right
and not just self-consistent.
"""

from __future__ import annotations

import math

from .image_io import GrayImage, RgbImage


class TooSmallError(ValueError):
    """A 3x3 neighbourhood does not fit inside the frame."""


def rgb2gray_frame_reference(image: RgbImage) -> GrayImage:
    """Truncating arithmetic mean of the three channels, per pixel."""
    pixels = [(r + g + b) // 3 for r, g, b in image.pixels]
    return GrayImage(image.width, image.height, pixels)


def sobel_frame_reference(image: GrayImage, magnitude_mode: str = "approx") -> GrayImage:
    """3x3 Sobel gradient magnitude with a one-pixel zero border.

    Output geometry equals input geometry; every border pixel is 0 because
    its window would fall outside the frame.  magnitude_mode selects between
    the |gh| + |gv| approximation ("approx") and the Euclidean magnitude
    rounded half away from zero ("exact"); both saturate at 255.
    """
    if magnitude_mode not in ("approx", "exact"):
        raise ValueError(f"unknown magnitude mode {magnitude_mode!r}")
    if image.width < 3 or image.height < 3:
        raise TooSmallError(f"{image.width}x{image.height} frame has no interior")

    w, h = image.width, image.height
    px = image.pixels
    out = [0] * (w * h)
    for i in range(1, h - 1):
        above = (i - 1) * w
        here = i * w
        below = (i + 1) * w
        for j in range(1, w - 1):
            p00 = px[above + j - 1]
            p01 = px[above + j]
            p02 = px[above + j + 1]
            p10 = px[here + j - 1]
            p12 = px[here + j + 1]
            p20 = px[below + j - 1]
            p21 = px[below + j]
            p22 = px[below + j + 1]
            gh = -p00 + p02 - 2 * p10 + 2 * p12 - p20 + p22
            gv = -p00 - 2 * p01 - p02 + p20 + 2 * p21 + p22
            if magnitude_mode == "approx":
                mag = abs(gh) + abs(gv)
            else:
                # round half away from zero; the argument is non-negative
                mag = int(math.sqrt(gh * gh + gv * gv) + 0.5)
            out[here + j] = 255 if mag > 255 else mag
    return GrayImage(w, h, out)
