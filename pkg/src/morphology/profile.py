"""Opening/closing morphological profiles and their differentials (the DMP)."""

from concurrent import futures
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Tuple

import numpy as np

from ..errors import DataError, ParameterError
from ..models.image import GrayImage
from ..models.specs import DifferentialSpec, ProfileSpec
from ..models.structuring_element import make_se
from .operators import closing, opening


class ProfileKind(Enum):
    """Which filter family a profile was built from."""
    OPENING = ('open', 'Opening')
    CLOSING = ('close', 'Closing')

    def __init__(self, tag: str, label: str):
        self.tag = tag
        self.label = label


@dataclass(eq=False)
class Profile:
    """Ordered bands of one kind, each with a provenance label."""
    kind: ProfileKind
    bands: List[GrayImage] = field(default_factory=list)
    labels: List[str] = field(default_factory=list)

    def __post_init__(self):
        if len(self.bands) != len(self.labels):
            raise DataError(f"{len(self.bands)} bands but {len(self.labels)} labels")
        shapes = {band.shape for band in self.bands}
        if len(shapes) > 1:
            raise DataError(f"Profile bands differ in size: {sorted(shapes)}")

    def __len__(self) -> int:
        return len(self.bands)

    def band(self, label: str) -> GrayImage:
        try:
            return self.bands[self.labels.index(label)]
        except ValueError:
            raise KeyError(f"No {self.kind.label.lower()} band labelled '{label}'") from None

    def as_array(self) -> np.ndarray:
        """Bands stacked as a B x H x W uint8 array."""
        return np.stack([band.data for band in self.bands])


def opening_profile(img: GrayImage, spec: ProfileSpec, workers: int = 1) -> Profile:
    """Openings at every size of the profile, in order."""
    return _profile(img, spec, ProfileKind.OPENING, workers)


def closing_profile(img: GrayImage, spec: ProfileSpec, workers: int = 1) -> Profile:
    """Closings at every size of the profile, in order."""
    return _profile(img, spec, ProfileKind.CLOSING, workers)


def _profile(img: GrayImage, spec: ProfileSpec, kind: ProfileKind, workers: int) -> Profile:
    if not isinstance(spec, ProfileSpec):
        raise ParameterError(f"Expected a ProfileSpec, got {type(spec).__name__}")
    op = opening if kind is ProfileKind.OPENING else closing
    bands = [op(img, make_se(spec.shape, size), workers) for size in spec.sizes]
    labels = [f"{kind.tag}[{size}]" for size in spec.sizes]
    return Profile(kind, bands, labels)


def absolute_difference(a: GrayImage, b: GrayImage) -> GrayImage:
    """|a - b| per pixel, exact in 8-bit arithmetic."""
    if a.shape != b.shape:
        raise DataError(f"Cannot difference {a.width}x{a.height} and {b.width}x{b.height}")
    return GrayImage(np.maximum(a.data, b.data) - np.minimum(a.data, b.data))


def filtered_by_size(img: GrayImage, spec: DifferentialSpec,
                     workers: int = 1) -> Dict[int, Tuple[GrayImage, GrayImage]]:
    """Opening and closing for each distinct size requested, computed once."""
    sizes = spec.distinct_sizes

    def run(size: int) -> Tuple[GrayImage, GrayImage]:
        se = make_se(spec.shape, size)
        return opening(img, se), closing(img, se)

    if workers > 1 and len(sizes) > 1:
        with futures.ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(run, sizes))
    else:
        results = [run(size) for size in sizes]
    return dict(zip(sizes, results))


def dmp(img: GrayImage, spec: DifferentialSpec, workers: int = 1) -> Tuple[Profile, Profile]:
    """Opening and closing differential profiles, one band per (outer, inner) pair."""
    if not isinstance(spec, DifferentialSpec):
        raise ParameterError(f"Expected a DifferentialSpec, got {type(spec).__name__}")
    for outer, inner in spec.pairs:
        if outer <= inner:
            raise ParameterError(f"Pair [{outer}-{inner}]: outer size must exceed inner size")

    filtered = filtered_by_size(img, spec, workers)
    open_bands, close_bands, open_labels, close_labels = [], [], [], []
    for index, (outer, inner) in enumerate(spec.pairs):
        pair = spec.pair_label(index)
        open_bands.append(absolute_difference(filtered[outer][0], filtered[inner][0]))
        close_bands.append(absolute_difference(filtered[outer][1], filtered[inner][1]))
        open_labels.append(f"{ProfileKind.OPENING.tag}{pair}")
        close_labels.append(f"{ProfileKind.CLOSING.tag}{pair}")

    return (Profile(ProfileKind.OPENING, open_bands, open_labels),
            Profile(ProfileKind.CLOSING, close_bands, close_labels))
