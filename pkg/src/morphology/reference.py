"""Brute-force flat morphology used as the correctness oracle.

Every output pixel is the max (or min) over all SE offsets of the
edge-replicated input. No decomposition, no 1-D filters.
"""

import numpy as np

from ..models.image import GrayImage
from ..models.structuring_element import StructuringElement


def scan_offsets(data: np.ndarray, se: StructuringElement, reduce: np.ufunc) -> np.ndarray:
    """Fold `reduce` over the image shifted by every offset of the SE."""
    r = se.radius
    height, width = data.shape
    padded = np.pad(data, r, mode='edge')
    out = None
    for dx, dy in sorted(se.offsets):
        window = padded[r + dy:r + dy + height, r + dx:r + dx + width]
        if out is None:
            out = window.copy()
        else:
            reduce(out, window, out=out)
    return out


def reference_dilate(img: GrayImage, se: StructuringElement) -> GrayImage:
    return GrayImage(scan_offsets(img.data, se, np.maximum))


def reference_erode(img: GrayImage, se: StructuringElement) -> GrayImage:
    return GrayImage(scan_offsets(img.data, se, np.minimum))


def reference_opening(img: GrayImage, se: StructuringElement) -> GrayImage:
    return reference_dilate(reference_erode(img, se), se)


def reference_closing(img: GrayImage, se: StructuringElement) -> GrayImage:
    return reference_erode(reference_dilate(img, se), se)
