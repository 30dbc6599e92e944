"""Chart generation for evaluation results and DMP stacks."""

import pandas as pd
import plotly.graph_objects as go
from plotly.subplots import make_subplots

from ..analysis.metrics import ClassMetrics
from ..analysis.statistics import RunComparator
from ..models.feature_stack import FeatureStack


class ChartGenerator:
    """Generate plotly figures for metric reports and feature stacks."""

    METRIC_COLORS = {
        'iou': '#AA96DA',
        'precision': '#4ECDC4',
        'recall': '#F38181',
        'f1': '#95E1D3',
    }
    RUN_PALETTE = ['#AA96DA', '#4ECDC4', '#F38181', '#95E1D3', '#FF6B6B', '#FCE38A']

    def create_class_iou_chart(self, metrics: ClassMetrics, title: str = 'Evaluation') -> go.Figure:
        """
        Create a bar chart of per-class IoU with the mIoU as a reference line.

        Args:
            metrics: Computed class metrics
            title: Chart title

        Returns:
            Plotly Figure object
        """
        frame = metrics.to_frame()
        scored = frame[frame['excluded'] == '']

        fig = go.Figure()
        fig.add_trace(go.Bar(
            name='IoU',
            x=scored['class'],
            y=(scored['iou'] * 100).round(2),
            marker_color=self.METRIC_COLORS['iou'],
            text=(scored['iou'] * 100).round(2),
            textposition='auto'
        ))
        if pd.notna(metrics.miou):
            fig.add_hline(y=round(metrics.miou * 100, 2), line_dash='dash',
                          annotation_text=f"mIoU {metrics.miou * 100:.2f}")

        fig.update_layout(
            title=f"{title} - Per-Class IoU",
            xaxis_title='Class',
            yaxis_title='IoU (%)',
            yaxis_range=[0, 100],
            height=500,
            template='plotly_white'
        )

        return fig

    def create_comparison_chart(self, comparator: RunComparator, metric: str = 'iou') -> go.Figure:
        """
        Create grouped bars of one per-class metric for several runs.

        Args:
            comparator: RunComparator holding the runs
            metric: 'iou', 'precision', 'recall' or 'f1'

        Returns:
            Plotly Figure object
        """
        table = comparator.per_class_table(metric)

        fig = go.Figure()
        for i, run in enumerate(table.columns):
            fig.add_trace(go.Bar(
                name=run,
                x=table.index,
                y=table[run],
                marker_color=self.RUN_PALETTE[i % len(self.RUN_PALETTE)],
            ))

        fig.update_layout(
            title=f"Run Comparison - Per-Class {metric.upper()}",
            xaxis_title='Class',
            yaxis_title=f"{metric.upper()} (%)",
            barmode='group',
            height=500,
            template='plotly_white'
        )

        return fig

    def create_stack_preview(self, stack: FeatureStack, columns: int = 5) -> go.Figure:
        """
        Create a grid of heatmaps, one per stack channel, titled by label.

        Args:
            stack: Feature stack to preview
            columns: Heatmaps per row

        Returns:
            Plotly Figure object
        """
        rows = -(-stack.channels // columns)
        fig = make_subplots(rows=rows, cols=columns, subplot_titles=stack.labels)
        for i in range(stack.channels):
            fig.add_trace(
                go.Heatmap(z=stack.data[i][::-1], colorscale='Greys', showscale=False),
                row=i // columns + 1, col=i % columns + 1
            )

        fig.update_xaxes(showticklabels=False)
        fig.update_yaxes(showticklabels=False)
        fig.update_layout(
            title='Feature Stack Channels',
            height=250 * rows,
            template='plotly_white'
        )

        return fig
