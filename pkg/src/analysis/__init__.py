"""Segmentation evaluation: confusion matrices, metrics and run comparison."""

from .metrics import ConfusionMatrix, ClassMetrics, accumulate, compute_metrics
from .statistics import RunComparator

__all__ = ['ConfusionMatrix', 'ClassMetrics', 'accumulate', 'compute_metrics', 'RunComparator']
