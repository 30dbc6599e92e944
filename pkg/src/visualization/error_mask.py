"""Color-coded error masks for one foreground class."""

from typing import Dict, Tuple

import numpy as np

from ..errors import DataError, ParameterError
from ..models.image import LabelMask, RgbImage

ERROR_COLORS: Dict[str, Tuple[int, int, int]] = {
    'true_positive': (255, 255, 255),   # white
    'false_positive': (255, 255, 0),    # yellow
    'false_negative': (255, 0, 0),      # red
    'wrong_class': (0, 0, 255),         # blue
    'other': (0, 0, 0),                 # black
}


def render_error_mask(gt: LabelMask, pred: LabelMask, foreground_class: int,
                      background_class: int = 0) -> RgbImage:
    """Paint the agreement between gt and pred for `foreground_class`.

    Blue marks foreground-to-foreground confusions in both directions:
    the class predicted as another foreground class, and another
    foreground class predicted as this one.
    """
    if gt.shape != pred.shape:
        raise DataError(
            f"Ground truth is {gt.width}x{gt.height} but prediction is {pred.width}x{pred.height}"
        )
    if foreground_class == background_class:
        raise ParameterError(
            f"Foreground class {foreground_class} cannot be the background class"
        )

    g, p = gt.data, pred.data
    gt_fg, pred_fg = g == foreground_class, p == foreground_class
    gt_bg, pred_bg = g == background_class, p == background_class

    out = np.zeros(g.shape + (3,), dtype=np.uint8)
    layers = (
        ('true_positive', gt_fg & pred_fg),
        ('false_positive', pred_fg & gt_bg),
        ('false_negative', gt_fg & pred_bg),
        ('wrong_class', (gt_fg & ~pred_fg & ~pred_bg) | (pred_fg & ~gt_fg & ~gt_bg)),
    )
    for name, where in layers:
        out[where] = ERROR_COLORS[name]
    return RgbImage(out)


def error_counts(gt: LabelMask, pred: LabelMask, foreground_class: int,
                 background_class: int = 0) -> Dict[str, int]:
    """Pixel count of each color in the rendered mask."""
    rendered = render_error_mask(gt, pred, foreground_class, background_class).data
    return {
        name: int(np.all(rendered == color, axis=-1).sum())
        for name, color in ERROR_COLORS.items()
    }
