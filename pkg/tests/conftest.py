"""Shared fixtures: seeded random rasters and small hand-built masks."""

import numpy as np
import pytest

from src.models.image import GrayImage, LabelMask, RgbImage


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_gray(rng):
    """Factory for random GrayImages of a given size."""
    def make(width: int, height: int) -> GrayImage:
        return GrayImage(rng.integers(0, 256, size=(height, width), dtype=np.uint8))
    return make


@pytest.fixture
def random_rgb(rng):
    """Factory for random RgbImages of a given size."""
    def make(width: int, height: int) -> RgbImage:
        return RgbImage(rng.integers(0, 256, size=(height, width, 3), dtype=np.uint8))
    return make


@pytest.fixture
def impulse():
    """5x5 zeros with a single 255 in the middle."""
    data = np.zeros((5, 5), dtype=np.uint8)
    data[2, 2] = 255
    return GrayImage(data)


@pytest.fixture
def worked_pair():
    """2x2 ground truth [0,0;1,1] and prediction [0,1;1,1]."""
    gt = LabelMask(np.array([[0, 0], [1, 1]], dtype=np.uint8))
    pred = LabelMask(np.array([[0, 1], [1, 1]], dtype=np.uint8))
    return gt, pred
