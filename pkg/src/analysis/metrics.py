"""Confusion-matrix accumulation and per-class segmentation metrics."""

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..errors import DataError, ParameterError
from ..models.image import LabelMask, Region

# Benchmark index order: background first, then the 15 foreground categories.
ISAID_CLASSES = (
    'Background', 'Ship', 'Storage Tank', 'Baseball Diamond', 'Tennis Court',
    'Basketball Court', 'Ground Track Field', 'Bridge', 'Large Vehicle',
    'Small Vehicle', 'Helicopter', 'Swimming Pool', 'Roundabout',
    'Soccer Ball Field', 'Plane', 'Harbor',
)

EXCLUDED_ABSENT = 'absent from ground truth and prediction'
EXCLUDED_BACKGROUND = 'background excluded by request'


def class_names_for(num_classes: int, vocabulary: Optional[str] = None) -> List[str]:
    """Display names: the iSAID vocabulary when requested, else class_<i>."""
    if vocabulary in (None, '', 'index'):
        return [f"class_{i}" for i in range(num_classes)]
    if vocabulary.lower() == 'isaid':
        if num_classes > len(ISAID_CLASSES):
            raise ParameterError(
                f"iSAID names cover {len(ISAID_CLASSES)} classes, got num_classes={num_classes}"
            )
        return list(ISAID_CLASSES[:num_classes])
    raise ParameterError(f"Unknown class vocabulary '{vocabulary}' (valid: index, isaid)")


class ConfusionMatrix:
    """counts[g][p] = pixels with ground truth g predicted as p."""

    def __init__(self, num_classes: int, counts: Optional[np.ndarray] = None):
        if num_classes < 1:
            raise ParameterError(f"num_classes must be positive, got {num_classes}")
        self.num_classes = num_classes
        if counts is None:
            counts = np.zeros((num_classes, num_classes), dtype=np.int64)
        counts = np.asarray(counts, dtype=np.int64)
        if counts.shape != (num_classes, num_classes):
            raise DataError(f"Counts must be {num_classes}x{num_classes}, got {counts.shape}")
        if (counts < 0).any():
            raise DataError("Confusion counts must be non-negative")
        self.counts = counts

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def tp(self) -> np.ndarray:
        return np.diag(self.counts)

    @property
    def fp(self) -> np.ndarray:
        return self.counts.sum(axis=0) - self.tp

    @property
    def fn(self) -> np.ndarray:
        return self.counts.sum(axis=1) - self.tp

    @property
    def tn(self) -> np.ndarray:
        return self.total - self.tp - self.fp - self.fn

    def add(self, gt: LabelMask, pred: LabelMask,
            valid: Optional[Union[Region, np.ndarray]] = None) -> 'ConfusionMatrix':
        """Count every pixel of the valid region; returns self."""
        if gt.shape != pred.shape:
            raise DataError(
                f"Ground truth is {gt.width}x{gt.height} but prediction is {pred.width}x{pred.height}"
            )
        mask = _valid_mask(gt, pred, valid)
        LabelMask.check_labels(np.where(mask, gt.data, 0), self.num_classes, name="ground truth")
        LabelMask.check_labels(np.where(mask, pred.data, 0), self.num_classes, name="prediction")

        g = gt.data[mask].astype(np.int64)
        p = pred.data[mask].astype(np.int64)
        n = self.num_classes
        self.counts += np.bincount(n * g + p, minlength=n * n).reshape(n, n)
        return self

    def __add__(self, other: 'ConfusionMatrix') -> 'ConfusionMatrix':
        if not isinstance(other, ConfusionMatrix):
            return NotImplemented
        if other.num_classes != self.num_classes:
            raise DataError(
                f"Cannot merge {self.num_classes}-class and {other.num_classes}-class matrices"
            )
        return ConfusionMatrix(self.num_classes, self.counts + other.counts)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConfusionMatrix):
            return NotImplemented
        return self.num_classes == other.num_classes and np.array_equal(self.counts, other.counts)

    @classmethod
    def merge(cls, matrices: Iterable['ConfusionMatrix'], num_classes: int) -> 'ConfusionMatrix':
        merged = cls(num_classes)
        for matrix in matrices:
            merged = merged + matrix
        return merged

    def to_list(self) -> List[List[int]]:
        return self.counts.tolist()


def _valid_mask(gt: LabelMask, pred: LabelMask,
                valid: Optional[Union[Region, np.ndarray]]) -> np.ndarray:
    if valid is None:
        return gt.valid_mask() & pred.valid_mask()
    if isinstance(valid, Region):
        mask = np.zeros(gt.shape, dtype=bool)
        mask[valid.slices()] = True
        return mask
    mask = np.asarray(valid, dtype=bool)
    if mask.shape != gt.shape:
        raise DataError(f"Valid mask shape {mask.shape} does not match masks {gt.shape}")
    return mask


def accumulate(cm: ConfusionMatrix, gt: LabelMask, pred: LabelMask,
               valid: Optional[Union[Region, np.ndarray]] = None) -> ConfusionMatrix:
    """Add one ground-truth/prediction pair to the matrix and return it."""
    return cm.add(gt, pred, valid)


def _ratio(numerator: np.ndarray, denominator: np.ndarray) -> np.ndarray:
    out = np.zeros(numerator.shape, dtype=np.float64)
    np.divide(numerator, denominator, out=out, where=denominator > 0)
    return out


def _mean(values: np.ndarray) -> float:
    # fsum is exactly rounded, so the mean does not depend on class order
    if values.size == 0:
        return float('nan')
    return math.fsum(values.tolist()) / values.size


@dataclass
class ClassMetrics:
    """Per-class ratios (NaN where undefined) and their macro averages."""
    class_names: List[str]
    iou: np.ndarray
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    support: np.ndarray
    predicted: np.ndarray
    miou: float
    mf1: float
    mprecision: float
    mrecall: float
    pixel_accuracy: float
    excluded: Dict[int, str] = field(default_factory=dict)

    @property
    def num_classes(self) -> int:
        return len(self.class_names)

    @property
    def included(self) -> List[int]:
        return [c for c in range(self.num_classes) if c not in self.excluded]

    def to_frame(self) -> pd.DataFrame:
        """One row per class, ratios as fractions."""
        return pd.DataFrame({
            'class_index': range(self.num_classes),
            'class': self.class_names,
            'iou': self.iou,
            'precision': self.precision,
            'recall': self.recall,
            'f1': self.f1,
            'support': self.support,
            'predicted': self.predicted,
            'excluded': [self.excluded.get(c, '') for c in range(self.num_classes)],
        })

    def macro(self) -> Dict[str, float]:
        return {
            'mIoU': self.miou,
            'mF1': self.mf1,
            'mPrecision': self.mprecision,
            'mRecall': self.mrecall,
            'pixel_accuracy': self.pixel_accuracy,
        }

    def to_dict(self) -> Dict:
        """JSON-ready report body: per-class rows, macro summary, exclusions."""
        def clean(value: float) -> Optional[float]:
            return None if math.isnan(value) else float(value)

        rows = []
        for c in range(self.num_classes):
            rows.append({
                'class_index': c,
                'class': self.class_names[c],
                'iou': clean(self.iou[c]),
                'precision': clean(self.precision[c]),
                'recall': clean(self.recall[c]),
                'f1': clean(self.f1[c]),
                'support': int(self.support[c]),
                'predicted': int(self.predicted[c]),
            })
        return {
            'num_classes': self.num_classes,
            'per_class': rows,
            'macro': {key: clean(value) for key, value in self.macro().items()},
            'excluded': [
                {'class_index': c, 'class': self.class_names[c], 'reason': reason}
                for c, reason in sorted(self.excluded.items())
            ],
        }


def compute_metrics(cm: ConfusionMatrix, exclude_background: bool = False,
                    background_class: int = 0,
                    class_names: Optional[Sequence[str]] = None) -> ClassMetrics:
    """IoU, precision, recall and F1 per class, macro-averaged over scored classes.

    A class absent from both ground truth and prediction has undefined
    ratios and is left out of every average. Any other class scores 0
    where its ratio would be 0/0.
    """
    n = cm.num_classes
    names = list(class_names) if class_names is not None else class_names_for(n)
    if len(names) != n:
        raise ParameterError(f"{len(names)} class names for {n} classes")

    tp = cm.tp.astype(np.float64)
    fp = cm.fp.astype(np.float64)
    fn = cm.fn.astype(np.float64)

    iou = _ratio(tp, tp + fp + fn)
    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    f1 = _ratio(2.0 * precision * recall, precision + recall)

    excluded: Dict[int, str] = {}
    absent = (tp + fp + fn) == 0
    for c in np.flatnonzero(absent):
        excluded[int(c)] = EXCLUDED_ABSENT
    for values in (iou, precision, recall, f1):
        values[absent] = np.nan
    if exclude_background:
        if not 0 <= background_class < n:
            raise ParameterError(f"Background class {background_class} outside [0, {n})")
        excluded[background_class] = EXCLUDED_BACKGROUND

    scored = np.array([c for c in range(n) if c not in excluded], dtype=int)
    total = cm.total
    return ClassMetrics(
        class_names=names,
        iou=iou,
        precision=precision,
        recall=recall,
        f1=f1,
        support=cm.counts.sum(axis=1),
        predicted=cm.counts.sum(axis=0),
        miou=_mean(iou[scored]),
        mf1=_mean(f1[scored]),
        mprecision=_mean(precision[scored]),
        mrecall=_mean(recall[scored]),
        pixel_accuracy=float(cm.tp.sum()) / total if total else float('nan'),
        excluded=dict(sorted(excluded.items())),
    )
