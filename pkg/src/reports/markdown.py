"""Human-readable evaluation and comparison reports."""

import math
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

from ..analysis.metrics import ClassMetrics
from ..analysis.statistics import RunComparator


def _pct(value: float) -> str:
    """Ratio as a percentage with two decimals, '-' when undefined."""
    return '-' if value is None or math.isnan(value) else f"{value * 100:.2f}"


def metrics_table(metrics: ClassMetrics) -> pd.DataFrame:
    """Per-class rows with percentages for display."""
    frame = metrics.to_frame()
    return pd.DataFrame({
        'Class': frame['class'],
        'IoU': frame['iou'].map(_pct),
        'F1': frame['f1'].map(_pct),
        'Prec.': frame['precision'].map(_pct),
        'Rec.': frame['recall'].map(_pct),
        'Pixels': frame['support'],
        'Note': frame['excluded'],
    })


def format_console_table(metrics: ClassMetrics) -> str:
    """Aligned plain-text table followed by the macro summary line."""
    table = metrics_table(metrics).to_string(index=False)
    summary = (f"mIoU {_pct(metrics.miou)}  mF1 {_pct(metrics.mf1)}  "
               f"mPrec. {_pct(metrics.mprecision)}  mRec. {_pct(metrics.mrecall)}  "
               f"pixel acc. {_pct(metrics.pixel_accuracy)}")
    return f"{table}\n\n{summary}"


def _markdown_table(frame: pd.DataFrame, index: bool = False) -> List[str]:
    if index:
        frame = frame.reset_index()
    header = [str(c) for c in frame.columns]
    lines = ["| " + " | ".join(header) + " |",
             "|" + "|".join("-" * (len(h) + 2) for h in header) + "|"]
    for row in frame.itertuples(index=False):
        cells = ['-' if (isinstance(v, float) and math.isnan(v)) else str(v) for v in row]
        lines.append("| " + " | ".join(cells) + " |")
    return lines


class MarkdownReportGenerator:
    """Generate markdown reports for evaluations and run comparisons."""

    def __init__(self, output_dir: str = "output", verbose: bool = True):
        """
        Initialize report generator.

        Args:
            output_dir: Directory to save reports
            verbose: Print the path of each generated report
        """
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.verbose = verbose

    def _write(self, lines: List[str], filename: str) -> str:
        report_path = self.output_dir / filename
        report_path.write_text('\n'.join(lines) + '\n', encoding='utf-8')
        if self.verbose:
            print(f"Generated report: {report_path}")
        return str(report_path)

    def generate_evaluation_report(self, metrics: ClassMetrics, context: Optional[Dict] = None,
                                   filename: str = "eval_report.md") -> str:
        """
        Generate a report for one evaluation.

        Args:
            metrics: Computed class metrics
            context: Extra facts to list (directories, file counts, flags)
            filename: Output filename

        Returns:
            Path to generated report
        """
        lines = ["# Segmentation Evaluation Report\n"]

        lines.append("## 📊 Summary\n")
        for key, value in (context or {}).items():
            lines.append(f"- **{key}:** {value}")
        lines.append(f"- **mIoU:** {_pct(metrics.miou)}")
        lines.append(f"- **mF1:** {_pct(metrics.mf1)}")
        lines.append(f"- **mPrecision:** {_pct(metrics.mprecision)}")
        lines.append(f"- **mRecall:** {_pct(metrics.mrecall)}")
        lines.append(f"- **Pixel accuracy:** {_pct(metrics.pixel_accuracy)}")
        lines.append("")

        lines.append("## 🎯 Per-Class Metrics\n")
        lines.extend(_markdown_table(metrics_table(metrics)))
        lines.append("")

        if metrics.excluded:
            lines.append("## ⚠️ Excluded From Averages\n")
            for c, reason in metrics.excluded.items():
                lines.append(f"- {metrics.class_names[c]} ({c}): {reason}")
            lines.append("")

        return self._write(lines, filename)

    def generate_comparison_report(self, comparator: RunComparator, metric: str = 'iou',
                                   filename: str = "comparison_report.md") -> str:
        """
        Generate a per-class comparison of several runs against the baseline.

        Args:
            comparator: RunComparator holding the runs
            metric: Per-class metric to compare
            filename: Output filename

        Returns:
            Path to generated report
        """
        lines = ["# Run Comparison Report\n"]
        lines.append(f"- **Baseline:** {comparator.baseline}")
        lines.append(f"- **Runs:** {', '.join(comparator.runs)}")
        lines.append("")

        lines.append("## 📊 Macro Metrics\n")
        lines.extend(_markdown_table(comparator.macro_table(), index=True))
        lines.append("")

        lines.append(f"## 🎯 Per-Class {metric.upper()}\n")
        table = comparator.per_class_table(metric)
        table['Best'] = comparator.best_runs(metric)
        lines.extend(_markdown_table(table, index=True))
        lines.append("")

        lines.append(f"## 📈 Change Versus {comparator.baseline}\n")
        lines.extend(_markdown_table(comparator.deltas(metric), index=True))
        lines.append("")

        for run, classes in comparator.classes_improved(metric).items():
            listed = ', '.join(classes) if classes else 'none'
            lines.append(f"- **{run}** improves on: {listed}")

        return self._write(lines, filename)
