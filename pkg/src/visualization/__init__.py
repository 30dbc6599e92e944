"""Error masks, charts and file export."""

from .charts import ChartGenerator
from .error_mask import render_error_mask, error_counts
from .exporter import VisualizationExporter

__all__ = ['ChartGenerator', 'render_error_mask', 'error_counts', 'VisualizationExporter']
