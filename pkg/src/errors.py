"""Exception types raised across the toolkit."""

from typing import List, Optional, Tuple


class DmpToolkitError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(DmpToolkitError, ValueError):
    """A caller-supplied parameter is outside its allowed domain."""


class DataError(DmpToolkitError, ValueError):
    """Input data is inconsistent (shape mismatch, out-of-range labels, ...)."""

    def __init__(self, message: str, pixel: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.pixel = pixel


class ConfigError(ParameterError):
    """A pipeline configuration failed validation."""

    def __init__(self, violations: List[str]):
        self.violations = list(violations)
        super().__init__("Invalid configuration:\n  - " + "\n  - ".join(self.violations))


class ImageReadError(DataError):
    """An image file could not be read."""


class ImageNotFoundError(ImageReadError):
    """The image path does not exist."""


class MalformedImageError(ImageReadError):
    """The file is not a decodable PNG."""


class UnsupportedDepthError(ImageReadError):
    """The PNG is not 8 bits per sample."""


class TensorFormatError(DataError):
    """A DMPT container is invalid."""


class BadMagicError(TensorFormatError):
    """The container does not start with the DMPT magic."""


class VersionMismatchError(TensorFormatError):
    """The container was written by an unsupported format version."""


class TruncatedTensorError(TensorFormatError):
    """The container ended before the declared payload or labels."""
