"""Shared test helpers: seeded random images and equality checks."""

import numpy as np

from rdls import ColorImage, plane_equal, rgb_image


def random_rgb(rng, width=None, height=None) -> ColorImage:
    if width is None:
        width = int(rng.integers(1, 65))
    if height is None:
        height = int(rng.integers(1, 65))
    return rgb_image(
        rng.integers(0, 256, (height, width), dtype=np.int64),
        rng.integers(0, 256, (height, width), dtype=np.int64),
        rng.integers(0, 256, (height, width), dtype=np.int64),
    )


def images_equal(a: ColorImage, b: ColorImage) -> bool:
    return a.roles == b.roles and all(
        plane_equal(pa, pb) for pa, pb in zip(a.planes, b.planes)
    )
