"""DMPT: a little-endian, self-describing container for feature stacks.

Layout: 20-byte header (magic "DMPT", u16 version, u16 dtype code,
u32 channels, u32 height, u32 width), the channel-major payload, then a
u32 length prefix and a UTF-8 JSON block holding the channel labels.
"""

import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from ..errors import BadMagicError, TensorFormatError, TruncatedTensorError, VersionMismatchError
from ..models.feature_stack import FeatureStack, ValueDomain

MAGIC = b'DMPT'
FORMAT_VERSION = 1
HEADER = struct.Struct('<4sHHIII')
LABEL_LENGTH = struct.Struct('<I')

DTYPE_CODES = {
    0: (np.dtype('<u1'), ValueDomain.RAW8),
    1: (np.dtype('<f4'), ValueDomain.UNIT_FLOAT),
}


@dataclass(frozen=True)
class TensorHeader:
    """Fixed-size DMPT header."""
    dtype: int
    channels: int
    height: int
    width: int
    version: int = FORMAT_VERSION
    magic: bytes = MAGIC

    @property
    def item_size(self) -> int:
        return DTYPE_CODES[self.dtype][0].itemsize

    @property
    def payload_length(self) -> int:
        return self.channels * self.height * self.width * self.item_size

    def pack(self) -> bytes:
        return HEADER.pack(self.magic, self.version, self.dtype,
                           self.channels, self.height, self.width)

    @classmethod
    def unpack(cls, raw: bytes) -> 'TensorHeader':
        if len(raw) >= len(MAGIC) and raw[:len(MAGIC)] != MAGIC:
            raise BadMagicError(f"Bad magic {raw[:len(MAGIC)]!r}, expected {MAGIC!r}")
        if len(raw) < HEADER.size:
            raise TruncatedTensorError(f"Header needs {HEADER.size} bytes, got {len(raw)}")
        magic, version, dtype, channels, height, width = HEADER.unpack_from(raw)
        if version != FORMAT_VERSION:
            raise VersionMismatchError(
                f"Container version {version}, this reader supports {FORMAT_VERSION}"
            )
        if dtype not in DTYPE_CODES:
            raise TensorFormatError(f"Unknown dtype code {dtype}")
        return cls(dtype, channels, height, width, version, magic)

    @classmethod
    def for_stack(cls, stack: FeatureStack) -> 'TensorHeader':
        code = next(c for c, (_, domain) in DTYPE_CODES.items() if domain is stack.value_domain)
        return cls(code, stack.channels, stack.height, stack.width)


def write_tensor(stack: FeatureStack, path: Union[str, Path]) -> Path:
    """Serialize a stack, labels included."""
    path = Path(path)
    header = TensorHeader.for_stack(stack)
    dtype = DTYPE_CODES[header.dtype][0]
    labels = json.dumps({'labels': stack.labels, 'value_domain': stack.value_domain.key},
                        ensure_ascii=False).encode('utf-8')
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'wb') as f:
        f.write(header.pack())
        f.write(np.ascontiguousarray(stack.data, dtype=dtype).tobytes())
        f.write(LABEL_LENGTH.pack(len(labels)))
        f.write(labels)
    return path


def read_tensor(path: Union[str, Path]) -> FeatureStack:
    """Load a stack written by write_tensor."""
    raw = Path(path).read_bytes()
    header = TensorHeader.unpack(raw)
    dtype, domain = DTYPE_CODES[header.dtype]

    start = HEADER.size
    end = start + header.payload_length
    if len(raw) < end + LABEL_LENGTH.size:
        raise TruncatedTensorError(
            f"{path}: payload needs {header.payload_length} bytes plus label block, "
            f"file has {len(raw) - start} after the header"
        )
    data = np.frombuffer(raw, dtype=dtype, count=header.channels * header.height * header.width,
                         offset=start)
    data = data.reshape(header.channels, header.height, header.width).astype(dtype.newbyteorder('='))

    (label_length,) = LABEL_LENGTH.unpack_from(raw, end)
    block = raw[end + LABEL_LENGTH.size:end + LABEL_LENGTH.size + label_length]
    if len(block) < label_length:
        raise TruncatedTensorError(f"{path}: label block needs {label_length} bytes, got {len(block)}")
    try:
        meta = json.loads(block.decode('utf-8'))
        labels = list(meta['labels'])
    except (UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError) as e:
        raise TensorFormatError(f"{path}: unreadable label block ({e})") from None
    return FeatureStack(data, labels, domain)
