#!/usr/bin/env python3
"""Assemble the benchmark corpus under data/corpus/.

Grayscale sources are written as binary PGM, colour sources as 8-bit RGB PNG.
Sources are images bundled with locally installed packages, plus the
USC-SIPI Mandrill (4.2.03) from the `baboon-image` npm package when a
tarball path is given with --mandrill.
"""
import argparse
import os
import tarfile
import io

import numpy as np
from PIL import Image


def skimage_source(name):
    import skimage.data
    return getattr(skimage.data, name)()


def pywt_source(name):
    import pywt.data
    return getattr(pywt.data, name)()


def matplotlib_source(name):
    import matplotlib.cbook
    with matplotlib.cbook.get_sample_data(name) as f:
        return np.asarray(Image.open(f).convert("RGB"))


SOURCES = [
    ("camera", lambda: skimage_source("camera")),
    ("moon", lambda: skimage_source("moon")),
    ("coins", lambda: skimage_source("coins")),
    ("astronaut", lambda: skimage_source("astronaut")),
    ("coffee", lambda: skimage_source("coffee")),
    ("chelsea", lambda: skimage_source("chelsea")),
    ("rocket", lambda: skimage_source("rocket")),
    ("grass", lambda: skimage_source("grass")),
    ("ascent", lambda: pywt_source("ascent")),
    ("aero", lambda: pywt_source("aero")),
    ("hopper", lambda: matplotlib_source("grace_hopper.jpg")),
]


def write(out_dir, name, arr):
    arr = np.asarray(arr)
    if arr.dtype != np.uint8:
        raise SystemExit(f"{name}: expected uint8, got {arr.dtype}")
    if arr.ndim == 3 and arr.shape[2] == 4:
        arr = arr[:, :, :3]
    if arr.ndim == 2:
        path = os.path.join(out_dir, name + ".pgm")
        h, w = arr.shape
        with open(path, "wb") as f:
            f.write(b"P5\n%d %d\n255\n" % (w, h))
            f.write(np.ascontiguousarray(arr).tobytes())
    else:
        path = os.path.join(out_dir, name + ".png")
        Image.fromarray(arr, "RGB").save(path, optimize=True)
    print(f"{path}: {arr.shape}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data", "corpus"))
    ap.add_argument("--mandrill", help="path to baboon-image-*.tgz")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    for name, fetch in SOURCES:
        write(args.out, name, fetch())
    if args.mandrill:
        with tarfile.open(args.mandrill) as tar:
            data = tar.extractfile("package/baboon.png").read()
        write(args.out, "mandrill", np.asarray(Image.open(io.BytesIO(data)).convert("RGB")))


if __name__ == "__main__":
    main()
