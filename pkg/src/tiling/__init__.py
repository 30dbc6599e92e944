"""Tiling of large rasters into overlapping crops and stitching back."""

from .tiler import (TilePlan, plan_tiles, extract_tile, extract_stack_tile, stitch_labels,
                    save_plan, load_plan)

__all__ = ['TilePlan', 'plan_tiles', 'extract_tile', 'extract_stack_tile', 'stitch_labels',
           'save_plan', 'load_plan']
