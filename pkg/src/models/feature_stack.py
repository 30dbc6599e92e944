"""Channel-major multi-band tensor with per-channel provenance labels."""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Union

import numpy as np
import pandas as pd

from ..errors import DataError, ParameterError


class ValueDomain(Enum):
    """Numeric domain of stack values."""
    RAW8 = ('raw8', np.uint8)
    UNIT_FLOAT = ('unit_float', np.float32)

    def __init__(self, key: str, dtype: type):
        self.key = key
        self.dtype = np.dtype(dtype)

    @classmethod
    def from_name(cls, name: Union[str, 'ValueDomain']) -> 'ValueDomain':
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace('-', '_')
        for domain in cls:
            if domain.key == key:
                return domain
        valid = ', '.join(d.key for d in cls)
        raise ParameterError(f"Unknown value domain '{name}' (valid: {valid})")


@dataclass(eq=False)
class FeatureStack:
    """C x H x W tensor; labels[i] describes channel i."""
    data: np.ndarray
    labels: List[str] = field(default_factory=list)
    value_domain: ValueDomain = ValueDomain.RAW8

    def __post_init__(self):
        self.value_domain = ValueDomain.from_name(self.value_domain)
        data = np.asarray(self.data)
        if data.ndim != 3:
            raise DataError(f"FeatureStack needs a C x H x W array, got shape {data.shape}")
        if data.dtype != self.value_domain.dtype:
            raise DataError(
                f"{self.value_domain.key} stack must be {self.value_domain.dtype}, got {data.dtype}"
            )
        if self.value_domain is ValueDomain.UNIT_FLOAT and data.size:
            if data.min() < 0.0 or data.max() > 1.0:
                raise DataError("unit_float stack values must lie in [0, 1]")
        self.labels = list(self.labels)
        if len(self.labels) != data.shape[0]:
            raise DataError(
                f"Stack has {data.shape[0]} channels but {len(self.labels)} labels"
            )
        self.data = data

    @property
    def channels(self) -> int:
        return int(self.data.shape[0])

    @property
    def height(self) -> int:
        return int(self.data.shape[1])

    @property
    def width(self) -> int:
        return int(self.data.shape[2])

    def channel(self, label: str) -> np.ndarray:
        """The band stored under a provenance label."""
        try:
            return self.data[self.labels.index(label)]
        except ValueError:
            raise KeyError(f"No channel labelled '{label}'") from None

    def to_domain(self, domain: Union[str, ValueDomain]) -> 'FeatureStack':
        """Convert between raw 8-bit values and values divided by 255."""
        domain = ValueDomain.from_name(domain)
        if domain is self.value_domain:
            return self
        if domain is ValueDomain.UNIT_FLOAT:
            data = (self.data.astype(np.float64) / 255.0).astype(np.float32)
        else:
            data = np.rint(self.data.astype(np.float64) * 255.0).astype(np.uint8)
        return FeatureStack(data, self.labels, domain)

    def summary(self) -> pd.DataFrame:
        """Per-channel min/max/mean table for console output."""
        flat = self.data.reshape(self.channels, -1)
        return pd.DataFrame({
            'channel': range(self.channels),
            'label': self.labels,
            'min': flat.min(axis=1),
            'max': flat.max(axis=1),
            'mean': flat.mean(axis=1, dtype=np.float64).round(4),
        })

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FeatureStack):
            return NotImplemented
        return (self.value_domain is other.value_domain
                and self.labels == other.labels
                and self.data.dtype == other.data.dtype
                and np.array_equal(self.data, other.data))
