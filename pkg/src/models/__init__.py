"""Domain models for rasters, structuring elements and DMP specifications."""

from .image import Region, GrayImage, RgbImage, LabelMask
from .structuring_element import SEShape, StructuringElement, make_se
from .specs import ProfileSpec, DifferentialSpec, DmpPreset, preset
from .feature_stack import ValueDomain, FeatureStack

__all__ = [
    'Region', 'GrayImage', 'RgbImage', 'LabelMask',
    'SEShape', 'StructuringElement', 'make_se',
    'ProfileSpec', 'DifferentialSpec', 'DmpPreset', 'preset',
    'ValueDomain', 'FeatureStack',
]
