"""Reader and writer for the IDX format used by the MNIST files.

Layout (big-endian)::

    [offset] [type]          [value]
    0000     32 bit integer  0x00000803 (images) or 0x00000801 (labels)
    0004     32 bit integer  number of items
    0008     32 bit integer  rows          (images only)
    0012     32 bit integer  columns       (images only)
    ....     unsigned byte   data, row-major

Files ending in ``.gz`` are decompressed transparently.
"""
from __future__ import annotations

import gzip
import struct
from pathlib import Path

import numpy as np

IMAGES_MAGIC = 0x00000803
LABELS_MAGIC = 0x00000801


class IdxFormatError(ValueError):
    pass


def _open(path):
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, "rb")
    return open(path, "rb")


def _read(path, magic: int, ndim: int) -> np.ndarray:
    with _open(path) as fh:
        data = fh.read()
    header = 4 * (1 + ndim)
    if len(data) < header:
        raise IdxFormatError(f"{path}: truncated header")
    got, *dims = struct.unpack(f">{1 + ndim}I", data[:header])
    if got != magic:
        raise IdxFormatError(f"{path}: magic number 0x{got:08x}, expected 0x{magic:08x}")
    count = int(np.prod(dims))
    payload = data[header:]
    if len(payload) != count:
        raise IdxFormatError(f"{path}: expected {count} data bytes, found {len(payload)}")
    return np.frombuffer(payload, dtype=np.uint8).reshape(dims)


def read_images(path) -> np.ndarray:
    """``(count, rows, cols)`` uint8 array."""
    return _read(path, IMAGES_MAGIC, 3)


def read_labels(path) -> np.ndarray:
    return _read(path, LABELS_MAGIC, 1)


def write_images(path, images) -> None:
    images = np.asarray(images, dtype=np.uint8)
    if images.ndim != 3:
        raise ValueError("images must be a (count, rows, cols) array")
    with open(path, "wb") as fh:
        fh.write(struct.pack(">4I", IMAGES_MAGIC, *images.shape))
        fh.write(images.tobytes())


def write_labels(path, labels) -> None:
    labels = np.asarray(labels, dtype=np.uint8).ravel()
    with open(path, "wb") as fh:
        fh.write(struct.pack(">2I", LABELS_MAGIC, len(labels)))
        fh.write(labels.tobytes())
