"""Flat grayscale morphology and morphological profiles."""

from .operators import dilate, erode, opening, closing
from .profile import ProfileKind, Profile, opening_profile, closing_profile, dmp

__all__ = [
    'dilate', 'erode', 'opening', 'closing',
    'ProfileKind', 'Profile', 'opening_profile', 'closing_profile', 'dmp',
]
