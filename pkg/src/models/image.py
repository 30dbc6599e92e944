"""Raster containers shared by every stage of the pipeline."""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..errors import DataError


@dataclass(frozen=True)
class Region:
    """Axis-aligned rectangle in pixel coordinates."""
    x: int
    y: int
    width: int
    height: int

    @property
    def is_empty(self) -> bool:
        return self.width <= 0 or self.height <= 0

    def slices(self) -> Tuple[slice, slice]:
        """Row and column slices selecting this region from an array."""
        return (slice(self.y, self.y + self.height),
                slice(self.x, self.x + self.width))


def _frozen(array: np.ndarray) -> np.ndarray:
    view = array.view()
    view.flags.writeable = False
    return view


class Raster:
    """Common behaviour of the immutable image containers."""

    data: np.ndarray
    valid_region: Optional[Region]

    @property
    def height(self) -> int:
        return int(self.data.shape[0])

    @property
    def width(self) -> int:
        return int(self.data.shape[1])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.height, self.width

    def valid_mask(self) -> np.ndarray:
        """Boolean HxW mask of the pixels that came from real source data."""
        if self.valid_region is None:
            return np.ones(self.shape, dtype=bool)
        mask = np.zeros(self.shape, dtype=bool)
        mask[self.valid_region.slices()] = True
        return mask

    def __eq__(self, other: object) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return np.array_equal(self.data, other.data)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.width}x{self.height})"


def _as_uint8(values: np.ndarray, what: str) -> np.ndarray:
    values = np.asarray(values)
    if values.dtype == np.uint8:
        return values
    if not np.issubdtype(values.dtype, np.integer):
        raise DataError(f"{what} must hold integer intensities, got dtype {values.dtype}")
    if values.size and (values.min() < 0 or values.max() > 255):
        raise DataError(f"{what} intensities must lie in [0, 255]")
    return values.astype(np.uint8)


@dataclass(eq=False, repr=False)
class GrayImage(Raster):
    """Single-band 8-bit intensity raster (H x W)."""
    data: np.ndarray
    valid_region: Optional[Region] = None

    def __post_init__(self):
        data = _as_uint8(self.data, "GrayImage")
        if data.ndim != 2 or data.shape[0] < 1 or data.shape[1] < 1:
            raise DataError(f"GrayImage needs a non-empty 2-D array, got shape {data.shape}")
        self.data = _frozen(data)

    @classmethod
    def from_flat(cls, width: int, height: int, values: Sequence[int]) -> 'GrayImage':
        """Build from row-major intensities; length must equal width*height."""
        flat = np.asarray(values)
        if flat.size != width * height:
            raise DataError(
                f"Expected {width * height} intensities for {width}x{height}, got {flat.size}"
            )
        return cls(flat.reshape(height, width))

    @classmethod
    def filled(cls, width: int, height: int, value: int) -> 'GrayImage':
        return cls(np.full((height, width), value, dtype=np.uint8))

    def complement(self) -> 'GrayImage':
        return GrayImage(255 - self.data)


@dataclass(eq=False, repr=False)
class RgbImage(Raster):
    """Interleaved 8-bit RGB raster (H x W x 3)."""
    data: np.ndarray
    valid_region: Optional[Region] = None

    def __post_init__(self):
        data = _as_uint8(self.data, "RgbImage")
        if data.ndim != 3 or data.shape[2] != 3 or data.shape[0] < 1 or data.shape[1] < 1:
            raise DataError(f"RgbImage needs an H x W x 3 array, got shape {data.shape}")
        self.data = _frozen(data)

    @classmethod
    def filled(cls, width: int, height: int, rgb: Tuple[int, int, int]) -> 'RgbImage':
        data = np.empty((height, width, 3), dtype=np.uint8)
        data[...] = rgb
        return cls(data)


@dataclass(eq=False, repr=False)
class LabelMask(Raster):
    """Row-major map of class indices (H x W)."""
    data: np.ndarray
    valid_region: Optional[Region] = None
    num_classes: Optional[int] = None

    def __post_init__(self):
        data = np.asarray(self.data)
        if not np.issubdtype(data.dtype, np.integer):
            raise DataError(f"LabelMask must hold integer labels, got dtype {data.dtype}")
        if data.ndim != 2 or data.shape[0] < 1 or data.shape[1] < 1:
            raise DataError(f"LabelMask needs a non-empty 2-D array, got shape {data.shape}")
        if data.size and data.min() < 0:
            row, col = np.argwhere(data < 0)[0]
            raise DataError(f"Negative label {data[row, col]} at pixel (x={col}, y={row})",
                            pixel=(int(col), int(row)))
        if self.num_classes is not None:
            self.check_labels(data, self.num_classes)
        self.data = _frozen(data)

    @property
    def labels(self) -> np.ndarray:
        return self.data

    @staticmethod
    def check_labels(data: np.ndarray, num_classes: int, name: str = "mask"):
        """Raise DataError naming the first pixel whose label is >= num_classes."""
        bad = data >= num_classes
        if bad.any():
            row, col = np.argwhere(bad)[0]
            raise DataError(
                f"Label {data[row, col]} in {name} at pixel (x={col}, y={row}) "
                f"is outside [0, {num_classes})",
                pixel=(int(col), int(row)),
            )
