"""Profile and differential specifications, plus the named DMP presets."""

from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence, Tuple, Union

from ..errors import ParameterError
from .structuring_element import SEShape, validate_se_size

Pair = Tuple[int, int]


@dataclass(frozen=True)
class ProfileSpec:
    """Strictly increasing odd SE sizes for an opening or closing profile."""
    shape: SEShape
    sizes: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'shape', SEShape.from_name(self.shape))
        if not self.sizes:
            raise ParameterError("Profile needs at least one SE size (got an empty size list)")
        sizes = tuple(validate_se_size(s) for s in self.sizes)
        for smaller, larger in zip(sizes, sizes[1:]):
            if larger <= smaller:
                raise ParameterError(
                    f"Profile sizes must be strictly increasing: {smaller} then {larger}"
                )
        object.__setattr__(self, 'sizes', sizes)


@dataclass(frozen=True)
class DifferentialSpec:
    """Ordered (outer, inner) SE-size pairs defining a DMP."""
    shape: SEShape
    pairs: Tuple[Pair, ...]

    def __post_init__(self):
        object.__setattr__(self, 'shape', SEShape.from_name(self.shape))
        if not self.pairs:
            raise ParameterError("Differential spec needs at least one (outer, inner) pair")
        checked = []
        for pair in self.pairs:
            try:
                outer, inner = pair
            except (TypeError, ValueError):
                raise ParameterError(f"Pair must be (outer, inner), got {pair!r}") from None
            outer, inner = validate_se_size(outer), validate_se_size(inner)
            if outer <= inner:
                raise ParameterError(
                    f"Pair [{outer}-{inner}]: outer size must exceed inner size"
                )
            checked.append((outer, inner))
        object.__setattr__(self, 'pairs', tuple(checked))

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def distinct_sizes(self) -> List[int]:
        """Every SE size used by any pair, ascending."""
        return sorted({size for pair in self.pairs for size in pair})

    @property
    def max_size(self) -> int:
        return max(outer for outer, _ in self.pairs)

    @property
    def channel_count(self) -> int:
        """Channels of the depth-extended stack: closings, gray, openings."""
        return 2 * len(self.pairs) + 1

    @classmethod
    def consecutive(cls, shape: Union[str, SEShape], sizes: Sequence[int]) -> 'DifferentialSpec':
        """Pairs each size with its predecessor: {3,5,7} -> [5-3], [7-5]."""
        profile = ProfileSpec(SEShape.from_name(shape), tuple(sizes))
        pairs = tuple(zip(profile.sizes[1:], profile.sizes[:-1]))
        return cls(profile.shape, pairs)

    @classmethod
    def parse(cls, shape: Union[str, SEShape], text: str) -> 'DifferentialSpec':
        """Parse a pair list such as "9-3,5-3"."""
        pairs = []
        for item in text.split(','):
            item = item.strip().strip('[]')
            if not item:
                continue
            parts = item.split('-')
            if len(parts) != 2:
                raise ParameterError(f"Cannot parse pair '{item}' (expected OUTER-INNER)")
            try:
                pairs.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise ParameterError(f"Cannot parse pair '{item}' (sizes must be integers)") from None
        return cls(SEShape.from_name(shape), tuple(pairs))

    def pair_label(self, index: int) -> str:
        outer, inner = self.pairs[index]
        return f"[{outer}-{inner}]"


class DmpPreset(Enum):
    """SE differential sets used by the DMPNet family of models."""
    ORIGINAL = ('original', ((5, 3), (7, 5), (9, 7)))
    IMPROVED = ('improved', ((5, 3), (7, 5), (9, 7), (15, 9), (21, 15), (27, 21), (35, 27)))
    EVO1 = ('evo1', ((29, 5), (23, 5), (19, 13), (17, 13), (17, 9), (15, 11), (13, 7)))
    EVO2 = ('evo2', ((29, 5), (23, 9), (23, 5), (19, 13), (17, 13), (15, 11), (13, 7)))

    def __init__(self, key: str, pairs: Tuple[Pair, ...]):
        self.key = key
        self.pairs = pairs

    @classmethod
    def from_name(cls, name: Union[str, 'DmpPreset']) -> 'DmpPreset':
        """Get a preset from its config/CLI name."""
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace('-', '').replace('_', '')
        for preset in cls:
            if preset.key == key:
                return preset
        raise ParameterError(f"Unknown preset '{name}' (valid: {', '.join(cls.names())})")

    @classmethod
    def names(cls) -> List[str]:
        return [p.key for p in cls]


def preset(name: Union[str, DmpPreset], shape: Union[str, SEShape]) -> DifferentialSpec:
    """The named preset's pair list with the requested SE shape."""
    return DifferentialSpec(SEShape.from_name(shape), DmpPreset.from_name(name).pairs)
