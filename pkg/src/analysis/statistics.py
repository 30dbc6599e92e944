"""Per-class comparison of evaluation runs against a baseline run."""

from typing import Dict, List, Mapping

import numpy as np
import pandas as pd

from ..errors import DataError, ParameterError

METRICS = ('iou', 'precision', 'recall', 'f1')
MACRO_KEYS = ('mIoU', 'mF1', 'mPrecision', 'mRecall', 'pixel_accuracy')


class RunComparator:
    """Compare metric reports (as written by the eval command) run by run."""

    def __init__(self, reports: Mapping[str, Dict]):
        """
        Initialize comparator.

        Args:
            reports: run name -> metrics report dict; the first run is the baseline
        """
        if len(reports) < 2:
            raise ParameterError(f"Need at least two runs to compare, got {len(reports)}")
        self.reports = dict(reports)
        self.runs: List[str] = list(self.reports)
        self.baseline = self.runs[0]
        self.data = self._per_class_frame()

    def _per_class_frame(self) -> pd.DataFrame:
        rows = []
        class_counts = set()
        for run, report in self.reports.items():
            try:
                per_class = report['per_class']
            except (KeyError, TypeError):
                raise DataError(f"Report for run '{run}' has no per_class section") from None
            class_counts.add(len(per_class))
            for row in per_class:
                rows.append({'run': run, 'class_index': row['class_index'], 'class': row['class'],
                             **{m: row.get(m) for m in METRICS}})
        if len(class_counts) > 1:
            raise DataError(f"Runs disagree on the number of classes: {sorted(class_counts)}")
        frame = pd.DataFrame(rows)
        frame[list(METRICS)] = frame[list(METRICS)].astype(float)
        return frame

    def per_class_table(self, metric: str = 'iou') -> pd.DataFrame:
        """
        Per-class scores x100, one column per run (run order preserved).

        Returns:
            DataFrame indexed by class name
        """
        if metric not in METRICS:
            raise ParameterError(f"Unknown metric '{metric}' (valid: {', '.join(METRICS)})")
        table = self.data.pivot(index=['class_index', 'class'], columns='run', values=metric)
        table = (table[self.runs] * 100).round(2)
        return table.droplevel('class_index')

    def deltas(self, metric: str = 'iou') -> pd.DataFrame:
        """Each run minus the baseline, per class, in points."""
        table = self.per_class_table(metric)
        others = [run for run in self.runs if run != self.baseline]
        return table[others].sub(table[self.baseline], axis=0).round(2)

    def best_runs(self, metric: str = 'iou') -> pd.Series:
        """Run with the highest score per class; ties go to the earlier run."""
        table = self.per_class_table(metric)
        best = table.fillna(-np.inf).idxmax(axis=1)
        return best.where(table.notna().any(axis=1))

    def macro_table(self) -> pd.DataFrame:
        """Macro metrics x100, one row per run."""
        rows = {run: {key: report.get('macro', {}).get(key) for key in MACRO_KEYS}
                for run, report in self.reports.items()}
        frame = pd.DataFrame.from_dict(rows, orient='index').astype(float).rename_axis('run')
        return (frame * 100).round(2)

    def classes_improved(self, metric: str = 'iou') -> Dict[str, List[str]]:
        """Classes each non-baseline run scores strictly better on."""
        deltas = self.deltas(metric)
        return {run: deltas.index[deltas[run] > 0].tolist() for run in deltas.columns}

    def to_dict(self, metric: str = 'iou') -> Dict:
        table = self.per_class_table(metric)
        return {
            'baseline': self.baseline,
            'runs': self.runs,
            'metric': metric,
            'per_class': {
                cls: {run: (None if pd.isna(v) else float(v)) for run, v in row.items()}
                for cls, row in table.iterrows()
            },
            'best_run': {cls: (None if pd.isna(v) else v) for cls, v in self.best_runs(metric).items()},
            'classes_improved': self.classes_improved(metric),
            'macro': {run: {k: (None if pd.isna(v) else float(v)) for k, v in row.items()}
                      for run, row in self.macro_table().iterrows()},
        }
