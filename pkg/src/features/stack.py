"""Grayscale conversion and depth-extended DMP channel stacking."""

from typing import Tuple, Union

import numpy as np

from ..models.feature_stack import FeatureStack, ValueDomain
from ..models.image import GrayImage, RgbImage
from ..models.specs import DifferentialSpec
from ..morphology.profile import dmp

# ITU-R BT.601 luma weights, in thousandths.
LUMA_WEIGHTS = (299, 587, 114)
GRAY_LABEL = 'gray'
RGB_LABELS = ('red', 'green', 'blue')


def to_luma(img: RgbImage) -> GrayImage:
    """(299 R + 587 G + 114 B) / 1000, rounded half up in integer arithmetic."""
    rgb = img.data.astype(np.uint32)
    wr, wg, wb = LUMA_WEIGHTS
    luma = (wr * rgb[..., 0] + wg * rgb[..., 1] + wb * rgb[..., 2] + 500) // 1000
    return GrayImage(luma.astype(np.uint8), valid_region=img.valid_region)


def _as_gray(img: Union[RgbImage, GrayImage]) -> GrayImage:
    return img if isinstance(img, GrayImage) else to_luma(img)


def stack_depth_extended(img: Union[RgbImage, GrayImage], spec: DifferentialSpec,
                         domain: Union[str, ValueDomain] = ValueDomain.UNIT_FLOAT,
                         workers: int = 1) -> FeatureStack:
    """Closing DMP bands, the grayscale image, then opening DMP bands.

    Within each group bands follow the pair order given; k pairs
    yield 2k + 1 channels.
    """
    gray = _as_gray(img)
    opening_dmp, closing_dmp = dmp(gray, spec, workers)
    bands = [band.data for band in closing_dmp.bands] + [gray.data] + \
            [band.data for band in opening_dmp.bands]
    labels = closing_dmp.labels + [GRAY_LABEL] + opening_dmp.labels
    stack = FeatureStack(np.stack(bands), labels, ValueDomain.RAW8)
    return stack.to_domain(domain)


def stack_hybrid(img: RgbImage, spec: DifferentialSpec,
                 domain: Union[str, ValueDomain] = ValueDomain.UNIT_FLOAT,
                 workers: int = 1) -> Tuple[FeatureStack, FeatureStack]:
    """The two input streams of a dual-encoder model: raw RGB and the DMP stack."""
    rgb = FeatureStack(np.ascontiguousarray(np.moveaxis(img.data, -1, 0)),
                       list(RGB_LABELS), ValueDomain.RAW8)
    return rgb.to_domain(domain), stack_depth_extended(img, spec, domain, workers)
