"""Network input construction: LUMA grayscale and DMP channel stacks."""

from ..models.specs import DmpPreset, preset
from .stack import to_luma, stack_depth_extended, stack_hybrid

__all__ = ['DmpPreset', 'preset', 'to_luma', 'stack_depth_extended', 'stack_hybrid']
