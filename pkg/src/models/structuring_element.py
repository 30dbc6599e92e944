"""Flat structuring elements (square and disk) of odd size."""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, FrozenSet, Tuple, Union

import numpy as np

from ..errors import ParameterError

MIN_SE_SIZE = 3
MAX_SE_SIZE = 99


class SEShape(Enum):
    """Supported structuring element shapes."""
    SQUARE = 'square'
    DISK = 'disk'

    @classmethod
    def from_name(cls, name: Union[str, 'SEShape']) -> 'SEShape':
        """Resolve a shape from its config/CLI name."""
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower()
        for shape in cls:
            if shape.value == key:
                return shape
        valid = ', '.join(s.value for s in cls)
        raise ParameterError(f"Unknown SE shape '{name}' (valid: {valid})")


@dataclass(frozen=True)
class StructuringElement:
    """Flat SE anchored at its center; offsets are (dx, dy) displacements."""
    shape: SEShape
    size: int
    offsets: FrozenSet[Tuple[int, int]]

    @property
    def radius(self) -> int:
        return (self.size - 1) // 2

    def __len__(self) -> int:
        return len(self.offsets)

    @property
    def footprint(self) -> np.ndarray:
        """Boolean size x size mask indexed [dy + r, dx + r]."""
        r = self.radius
        mask = np.zeros((self.size, self.size), dtype=bool)
        for dx, dy in self.offsets:
            mask[dy + r, dx + r] = True
        return mask

    def chords(self) -> Dict[int, int]:
        """Half-width of the horizontal run at every row offset dy.

        Both shipped shapes are convex and symmetric, so each row of the
        support is the contiguous run [-w, w].
        """
        widths: Dict[int, int] = {}
        for dx, dy in self.offsets:
            widths[dy] = max(widths.get(dy, 0), abs(dx))
        return dict(sorted(widths.items()))


def validate_se_size(size: int) -> int:
    """Return size unchanged if it is an odd integer in [3, 99]."""
    if isinstance(size, bool) or not isinstance(size, (int, np.integer)):
        raise ParameterError(f"SE size must be an integer, got {size!r}")
    size = int(size)
    if size % 2 == 0:
        raise ParameterError(f"SE size must be odd, got {size}")
    if not MIN_SE_SIZE <= size <= MAX_SE_SIZE:
        raise ParameterError(
            f"SE size must lie in [{MIN_SE_SIZE}, {MAX_SE_SIZE}], got {size}"
        )
    return size


@lru_cache(maxsize=None)
def _build(shape: SEShape, size: int) -> StructuringElement:
    r = (size - 1) // 2
    dy, dx = np.ogrid[-r:r + 1, -r:r + 1]
    if shape is SEShape.SQUARE:
        support = np.ones((size, size), dtype=bool)
    else:
        support = (dx * dx + dy * dy) <= r * r
    rows, cols = np.nonzero(support)
    offsets = frozenset((int(c) - r, int(rw) - r) for rw, c in zip(rows, cols))
    return StructuringElement(shape=shape, size=size, offsets=offsets)


def make_se(shape: Union[str, SEShape], size: int) -> StructuringElement:
    """Materialize a flat square or disk SE of odd size."""
    return _build(SEShape.from_name(shape), validate_se_size(size))
