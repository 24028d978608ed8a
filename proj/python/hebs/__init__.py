"""Histogram-equalized backlight scaling for LCD power reduction."""

from hebs._core import (
    Image,
    __version__,
    breakpoints,
    ccfl_power,
    coarsen,
    compare,
    distortion,
    equalize,
    histogram,
    ladder_levels,
    load_image,
    run_hebs,
    save_image,
    sweep,
    tft_power,
    uqi,
)

__all__ = [
    "Image",
    "__version__",
    "breakpoints",
    "ccfl_power",
    "coarsen",
    "compare",
    "distortion",
    "equalize",
    "histogram",
    "ladder_levels",
    "load_image",
    "run_hebs",
    "save_image",
    "sweep",
    "tft_power",
    "uqi",
]
