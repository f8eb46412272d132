#!/usr/bin/env python3
"""Builds the desk-scale test corpus: 256x256 8-bit grayscale PGMs cut from
the natural photographs bundled with scikit-image."""

import os
import sys

import numpy as np
from skimage import color, io, transform
import skimage.data

SRC = os.path.dirname(skimage.data.__file__)
SIDE = 256

# (file, mode) -- "resize": shorter side scaled to 256 then centre crop;
# (r, c): native-resolution 256x256 crop at that offset.
SOURCES = [
    ("astronaut.png", "resize"), ("camera.png", "resize"), ("coffee.png", "resize"),
    ("chelsea.png", "resize"), ("coins.png", "resize"), ("moon.png", "resize"),
    ("brick.png", "resize"), ("grass.png", "resize"), ("gravel.png", "resize"),
    ("rocket.jpg", "resize"), ("retina.jpg", "resize"), ("hubble_deep_field.jpg", "resize"),
    ("ihc.png", "resize"), ("motorcycle_left.png", "resize"), ("motorcycle_right.png", "resize"),
    ("cell.png", "resize"), ("clock_motion.png", "resize"),
    ("astronaut.png", (40, 140)), ("camera.png", (200, 120)), ("retina.jpg", (500, 600)),
    ("motorcycle_left.png", (150, 300)),
]


def load_gray(path):
    img = io.imread(path)
    if img.ndim == 3:
        img = color.rgb2gray(img[..., :3])
    else:
        img = img.astype(np.float64) / (255.0 if img.max() > 1 else 1.0)
    return img


def main(out_dir):
    os.makedirs(out_dir, exist_ok=True)
    for i, (name, mode) in enumerate(SOURCES):
        g = load_gray(os.path.join(SRC, name))
        if mode == "resize":
            s = SIDE / min(g.shape)
            g = transform.resize(g, (round(g.shape[0] * s), round(g.shape[1] * s)), anti_aliasing=True)
            r0 = (g.shape[0] - SIDE) // 2
            c0 = (g.shape[1] - SIDE) // 2
        else:
            r0, c0 = mode
        g = g[r0:r0 + SIDE, c0:c0 + SIDE]
        assert g.shape == (SIDE, SIDE), (name, g.shape)
        px = np.clip(np.rint(g * 255.0), 0, 255).astype(np.uint8)
        stem = os.path.splitext(name)[0]
        path = os.path.join(out_dir, f"{i:02d}_{stem}.pgm")
        with open(path, "wb") as f:
            f.write(b"P5\n%d %d\n255\n" % (SIDE, SIDE))
            f.write(px.tobytes())
        print(path)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/corpus")
