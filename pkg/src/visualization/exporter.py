"""Export figures and report data to files."""

import json
import math
from enum import Enum
from pathlib import Path
from typing import Dict

import numpy as np
import pandas as pd
import plotly.graph_objects as go


class VisualizationExporter:
    """Write charts, JSON reports and tables into one output directory."""

    def __init__(self, output_dir: str = "output", verbose: bool = True):
        """
        Initialize exporter.

        Args:
            output_dir: Directory to save exported files
            verbose: Print a line for every exported file
        """
        self.output_dir = Path(output_dir)
        self.output_dir.mkdir(parents=True, exist_ok=True)
        self.verbose = verbose

    def _report(self, message: str):
        if self.verbose:
            print(message)

    def export_html(self, fig: go.Figure, filename: str) -> Path:
        """
        Export figure as interactive HTML.

        Args:
            fig: Plotly Figure object
            filename: Output filename (without extension)
        """
        output_path = self.output_dir / f"{filename}.html"
        fig.write_html(str(output_path))
        self._report(f"Exported HTML: {output_path}")
        return output_path

    def export_image(self, fig: go.Figure, filename: str, format: str = 'png',
                     width: int = 1200, height: int = 800) -> Path:
        """
        Export figure as static image, falling back to HTML.

        Note: Requires kaleido package
        """
        try:
            output_path = self.output_dir / f"{filename}.{format}"
            fig.write_image(str(output_path), width=width, height=height, format=format)
            self._report(f"Exported {format.upper()}: {output_path}")
            return output_path
        except Exception as e:
            print(f"Warning: Could not export image (install kaleido: pip install kaleido): {e}")
            return self.export_html(fig, filename)

    def export_data(self, data: Dict, filename: str) -> Path:
        """
        Export report data as JSON.

        Args:
            data: Dictionary with report data
            filename: Output filename (without extension)
        """
        def convert(obj):
            """Convert numpy and enum values to JSON-native types."""
            if isinstance(obj, np.integer):
                return int(obj)
            elif isinstance(obj, np.floating):
                return None if math.isnan(obj) else float(obj)
            elif isinstance(obj, np.ndarray):
                return obj.tolist()
            elif isinstance(obj, Enum):
                return obj.name.lower()
            elif isinstance(obj, Path):
                return str(obj)
            raise TypeError(f"Cannot serialize {type(obj).__name__}")

        output_path = self.output_dir / f"{filename}.json"
        with open(output_path, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2, ensure_ascii=False, default=convert)
        self._report(f"Exported JSON: {output_path}")
        return output_path

    def export_table(self, table: pd.DataFrame, filename: str) -> Path:
        """Export a DataFrame as CSV."""
        output_path = self.output_dir / f"{filename}.csv"
        table.to_csv(output_path)
        self._report(f"Exported CSV: {output_path}")
        return output_path
