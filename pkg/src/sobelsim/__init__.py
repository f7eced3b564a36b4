"""Cycle-level simulator for two streaming Sobel edge-detection cores."""

from .blocks import (
    SOBEL_MASKS,
    ConfigMismatchError,
    GradientPair,
    LineBuffer,
    Rgb2GrayPE,
    SobelConfig,
    SobelHdlPE,
    SobelHlsPE,
    SobelMasks,
    U8ToU32PE,
    WidthTooLargeError,
    Window3x3,
    convolve3x3,
    gray_frame,
    gray_image_from_beats,
    magnitude,
    rgb2gray_pe,
    rgb_frame,
    sobel_hdl_pe,
    sobel_hls_pe,
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
    hamming_distance,
    read_bmp,
    row_stride,
    write_bmp,
)
from .metrics import (
    ComparisonReport,
    ResourceEstimate,
    build_report,
    estimate_resources,
    serialize_report,
)
from .oracle import TooSmallError, rgb2gray_frame_reference, sobel_frame_reference
from .stream import (
    NO_STALLS,
    Beat,
    Channel,
    CycleStats,
    DeadlockError,
    Pipeline,
    ProcessingElement,
    ProtocolError,
    StallModel,
    WidthMismatchError,
    build_pipeline,
    run_frame,
)

__version__ = "0.1.0"
