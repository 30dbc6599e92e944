"""Raster and tensor persistence."""

from .loader import ImageLoader, read_png, write_png
from .tensor import TensorHeader, read_tensor, write_tensor

__all__ = ['ImageLoader', 'read_png', 'write_png', 'TensorHeader', 'read_tensor', 'write_tensor']
