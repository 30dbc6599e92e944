"""PNG ingestion/emission and directory scanning for image and mask sets."""

import struct
from pathlib import Path
from typing import Dict, List, Tuple, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..errors import (DataError, ImageNotFoundError, MalformedImageError, ParameterError,
                      UnsupportedDepthError)
from ..features.stack import to_luma
from ..models.image import GrayImage, LabelMask, RgbImage

PNG_SIGNATURE = b'\x89PNG\r\n\x1a\n'
# length, b'IHDR', width, height, bit depth, color type
IHDR = struct.Struct('>I4sIIBB')
PALETTE_COLOR_TYPE = 3

IMAGE_KINDS = ('auto', 'rgb', 'gray', 'labels')

Raster = Union[RgbImage, GrayImage, LabelMask]


def _png_header(path: Path) -> Tuple[int, int]:
    """Bit depth and color type from the IHDR chunk."""
    with open(path, 'rb') as f:
        head = f.read(len(PNG_SIGNATURE) + IHDR.size)
    if len(head) < len(PNG_SIGNATURE) + IHDR.size or not head.startswith(PNG_SIGNATURE):
        raise MalformedImageError(f"Not a PNG file: {path}")
    _, chunk, _, _, bit_depth, color_type = IHDR.unpack_from(head, len(PNG_SIGNATURE))
    if chunk != b'IHDR':
        raise MalformedImageError(f"PNG file {path} does not start with an IHDR chunk")
    return bit_depth, color_type


def read_png(path: Union[str, Path], kind: str = 'auto') -> Raster:
    """
    Read an 8-bit PNG.

    Args:
        path: PNG file
        kind: 'rgb', 'gray', 'labels', or 'auto' (RGB/palette -> RgbImage,
              single channel -> GrayImage)

    Returns:
        RgbImage, GrayImage or LabelMask. Palette images are expanded to RGB,
        except for label masks where the palette indices are the labels.
    """
    if kind not in IMAGE_KINDS:
        raise ParameterError(f"Unknown image kind '{kind}' (valid: {', '.join(IMAGE_KINDS)})")
    path = Path(path)
    if not path.is_file():
        raise ImageNotFoundError(f"Image not found: {path}")

    bit_depth, color_type = _png_header(path)
    if bit_depth != 8 and not (color_type == PALETTE_COLOR_TYPE and bit_depth < 8):
        raise UnsupportedDepthError(f"{path} has {bit_depth}-bit samples; only 8-bit PNGs are supported")

    try:
        with Image.open(path) as im:
            im.load()
            mode = im.mode
            if kind == 'labels':
                if mode not in ('L', 'P', 'LA'):
                    raise DataError(f"Label mask {path} must be single-channel, got mode {mode}")
                data = np.array(im.getchannel(0) if mode == 'LA' else im)
                return LabelMask(data)
            if kind == 'rgb' or (kind == 'auto' and mode not in ('L', 'LA')):
                return RgbImage(np.array(im.convert('RGB')))
            if mode in ('L', 'LA'):
                return GrayImage(np.array(im.convert('L')))
            # gray intent on a color image goes through the BT.601 luma transform
            return to_luma(RgbImage(np.array(im.convert('RGB'))))
    except (UnidentifiedImageError, OSError, SyntaxError) as e:
        raise MalformedImageError(f"Cannot decode PNG {path}: {e}") from None


def write_png(raster: Raster, path: Union[str, Path]) -> Path:
    """Write a raster losslessly; label masks must fit in 8 bits."""
    path = Path(path)
    data = raster.data
    if isinstance(raster, LabelMask):
        if data.size and data.max() > 255:
            raise DataError(f"Label {data.max()} does not fit an 8-bit PNG")
        data = data.astype(np.uint8)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(np.ascontiguousarray(data)).save(path, format='PNG')
    return path


class ImageLoader:
    """Scan directories of PNG rasters."""

    def __init__(self, data_path: Union[str, Path]):
        """
        Initialize loader.

        Args:
            data_path: Path to a single PNG or a directory of PNGs
        """
        self.data_path = Path(data_path)

    def list_files(self) -> List[Path]:
        """PNG files under the path, sorted by name."""
        if self.data_path.is_file():
            return [self.data_path]
        if self.data_path.is_dir():
            return sorted(p for p in self.data_path.iterdir()
                          if p.is_file() and p.suffix.lower() == '.png')
        raise ImageNotFoundError(f"Path does not exist: {self.data_path}")

    def load_all(self, kind: str = 'auto') -> Dict[str, Raster]:
        """Read every PNG, skipping unreadable files with a warning."""
        rasters = {}
        for png in self.list_files():
            try:
                rasters[png.name] = read_png(png, kind)
            except DataError as e:
                print(f"Warning: Failed to load {png}: {e}")
        return rasters

    @staticmethod
    def match_directories(gt_dir: Union[str, Path],
                          pred_dir: Union[str, Path]) -> Tuple[List[Tuple[Path, Path]], List[str]]:
        """
        Pair files by name across two directories.

        Returns:
            (matched (gt, pred) pairs sorted by name, names present on one side only)
        """
        gt_files = {p.name: p for p in ImageLoader(gt_dir).list_files()}
        pred_files = {p.name: p for p in ImageLoader(pred_dir).list_files()}
        common = sorted(gt_files.keys() & pred_files.keys())
        unmatched = sorted(gt_files.keys() ^ pred_files.keys())
        return [(gt_files[name], pred_files[name]) for name in common], unmatched
