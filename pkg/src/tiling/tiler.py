"""Sliding-window tiling of large rasters and stitching of per-tile label maps."""

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, TypeVar, Union

import numpy as np

from ..errors import DataError, ParameterError
from ..models.feature_stack import FeatureStack
from ..models.image import GrayImage, LabelMask, Region, RgbImage

DEFAULT_WINDOW = 896
DEFAULT_STEP = 512

Origin = Tuple[int, int]
TileSource = TypeVar('TileSource', RgbImage, GrayImage, LabelMask)


def axis_origins(extent: int, window: int, step: int) -> List[int]:
    """0, step, 2*step, ... while origin + window < extent, then extent - window."""
    if extent <= window:
        return [0]
    origins = list(range(0, extent - window, step))
    origins.append(extent - window)
    return origins


@dataclass(frozen=True)
class TilePlan:
    """Tile origins (top-left corners, row-major) covering an image."""
    image_width: int
    image_height: int
    window: int
    step: int
    origins: Tuple[Origin, ...]

    @property
    def tile_count(self) -> int:
        return len(self.origins)

    def valid_size(self, origin: Origin) -> Tuple[int, int]:
        """Width and height of the part of the tile that lies inside the image."""
        x, y = origin
        return min(self.window, self.image_width - x), min(self.window, self.image_height - y)

    def source_region(self, origin: Origin) -> Region:
        width, height = self.valid_size(origin)
        return Region(origin[0], origin[1], width, height)

    @staticmethod
    def tile_name(stem: str, origin: Origin, suffix: str = '.png') -> str:
        return f"{stem}_x{origin[0]}_y{origin[1]}{suffix}"

    def to_manifest(self, stem: Optional[str] = None) -> Dict:
        manifest = {
            'image_width': self.image_width,
            'image_height': self.image_height,
            'window': self.window,
            'step': self.step,
            'origins': [list(origin) for origin in self.origins],
        }
        if stem is not None:
            manifest['stem'] = stem
            manifest['tiles'] = [self.tile_name(stem, origin) for origin in self.origins]
        return manifest

    @classmethod
    def from_manifest(cls, manifest: Dict) -> 'TilePlan':
        try:
            plan = plan_tiles(int(manifest['image_width']), int(manifest['image_height']),
                              int(manifest['window']), int(manifest['step']))
        except KeyError as e:
            raise DataError(f"Tile manifest is missing field {e}") from None
        stored = tuple(tuple(int(v) for v in origin) for origin in manifest.get('origins', []))
        if stored and stored != plan.origins:
            raise DataError("Tile manifest origins do not match its image size, window and step")
        return plan


def plan_tiles(image_width: int, image_height: int,
               window: int = DEFAULT_WINDOW, step: int = DEFAULT_STEP) -> TilePlan:
    """
    Plan window x window crops every `step` pixels, clamping the last one to the edge.

    Raises:
        ParameterError: non-positive window or step, an empty image, or a step
            larger than the window (the tiles would not cover every pixel)
    """
    problems = []
    if window < 1:
        problems.append(f"window must be positive, got {window}")
    if step < 1:
        problems.append(f"step must be positive, got {step}")
    if window >= 1 and step > window:
        problems.append(f"step {step} exceeds window {window}; tiles would leave gaps")
    if image_width < 1 or image_height < 1:
        problems.append(f"image must be at least 1x1, got {image_width}x{image_height}")
    if problems:
        raise ParameterError("; ".join(problems))

    xs = axis_origins(image_width, window, step)
    ys = axis_origins(image_height, window, step)
    return TilePlan(image_width, image_height, window, step,
                    tuple((x, y) for y in ys for x in xs))


def extract_tile(img: TileSource, origin: Origin, window: int) -> TileSource:
    """window x window crop at origin; sources smaller than the window are edge-padded.

    The returned raster records the unpadded part as its valid region.
    """
    x, y = origin
    max_x, max_y = max(0, img.width - window), max(0, img.height - window)
    if not (0 <= x <= max_x and 0 <= y <= max_y):
        raise ParameterError(
            f"Tile origin ({x}, {y}) outside plan bounds [0, {max_x}] x [0, {max_y}]"
        )
    crop = img.data[y:y + window, x:x + window]
    height, width = crop.shape[:2]
    if (height, width) == (window, window):
        return replace(img, data=crop.copy(), valid_region=None)

    pad = [(0, window - height), (0, window - width)] + [(0, 0)] * (crop.ndim - 2)
    padded = np.pad(crop, pad, mode='edge')
    return replace(img, data=padded, valid_region=Region(0, 0, width, height))


def stitch_labels(plan: TilePlan, tiles: Sequence[LabelMask], num_classes: int) -> LabelMask:
    """Majority vote over every tile covering a pixel; ties go to the lowest class.

    Padded tile areas never vote.
    """
    if len(tiles) != plan.tile_count:
        raise ParameterError(f"Plan has {plan.tile_count} tiles but {len(tiles)} were given")
    if num_classes < 1:
        raise ParameterError(f"num_classes must be positive, got {num_classes}")

    crops = []
    for origin, tile in zip(plan.origins, tiles):
        width, height = plan.valid_size(origin)
        if tile.width < width or tile.height < height:
            raise DataError(
                f"Tile at {origin} is {tile.width}x{tile.height}, needs at least {width}x{height}"
            )
        crop = tile.data[:height, :width]
        LabelMask.check_labels(crop, num_classes, name=f"tile {origin}")
        crops.append((plan.source_region(origin), crop))

    shape = (plan.image_height, plan.image_width)
    best = np.zeros(shape, dtype=np.int32)
    best_votes = np.zeros(shape, dtype=np.int32)
    votes = np.empty(shape, dtype=np.int32)
    for label in range(num_classes):
        votes.fill(0)
        for region, crop in crops:
            votes[region.slices()] += crop == label
        # strict > keeps the lower class on ties
        wins = votes > best_votes
        best[wins] = label
        best_votes[wins] = votes[wins]

    dtype = np.uint8 if num_classes <= 256 else np.int32
    return LabelMask(best.astype(dtype), num_classes=num_classes)


def save_plan(plan: TilePlan, path: Union[str, Path], stem: Optional[str] = None) -> Path:
    path = Path(path)
    path.write_text(json.dumps(plan.to_manifest(stem), indent=2), encoding='utf-8')
    return path


def load_plan(path: Union[str, Path]) -> Tuple[TilePlan, Dict]:
    """Plan and raw manifest dict (which may carry `stem` and `tiles`)."""
    path = Path(path)
    try:
        manifest = json.loads(path.read_text(encoding='utf-8'))
    except json.JSONDecodeError as e:
        raise DataError(f"Tile manifest {path} is not valid JSON: {e}") from None
    return TilePlan.from_manifest(manifest), manifest


def extract_stack_tile(stack: FeatureStack, origin: Origin, window: int) -> FeatureStack:
    """Crop every channel of a stack the way extract_tile crops a raster."""
    x, y = origin
    max_x, max_y = max(0, stack.width - window), max(0, stack.height - window)
    if not (0 <= x <= max_x and 0 <= y <= max_y):
        raise ParameterError(
            f"Tile origin ({x}, {y}) outside plan bounds [0, {max_x}] x [0, {max_y}]"
        )
    crop = stack.data[:, y:y + window, x:x + window]
    pad = [(0, 0), (0, window - crop.shape[1]), (0, window - crop.shape[2])]
    return FeatureStack(np.pad(crop, pad, mode='edge'), stack.labels, stack.value_domain)
