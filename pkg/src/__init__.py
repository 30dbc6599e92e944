"""DMP Toolkit - Differential morphological profile features for aerial segmentation."""

__version__ = "1.0.0"
