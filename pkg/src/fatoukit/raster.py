"""P5 (binary) PGM rasters for classification maps and boolean masks.

Byte-stable goldens: fixed header layout, row 0 at the top (largest
imaginary part).  Label palette: JULIA=0, UNDECIDED=128, FATOU=255,
masked=64.  Boolean rasters: member=255, non-member=0.
"""

from __future__ import annotations

import numpy as np

from .normality import (LABEL_FATOU, LABEL_JULIA, LABEL_MASKED,
                        LABEL_UNDECIDED)

__all__ = ["write_pgm", "read_pgm", "labels_to_bytes", "bool_to_bytes",
           "LABEL_PALETTE"]

LABEL_PALETTE = {LABEL_JULIA: 0, LABEL_UNDECIDED: 128, LABEL_FATOU: 255,
                 LABEL_MASKED: 64}


def labels_to_bytes(labels: np.ndarray) -> np.ndarray:
    out = np.zeros(labels.shape, dtype=np.uint8)
    for label, value in LABEL_PALETTE.items():
        out[labels == label] = value
    return out


def bool_to_bytes(mask: np.ndarray) -> np.ndarray:
    return np.where(mask, 255, 0).astype(np.uint8)


def write_pgm(path, data: np.ndarray) -> None:
    """Write a (H, W) uint8 array as P5; row 0 of the file is the top."""
    data = np.asarray(data, dtype=np.uint8)
    if data.ndim != 2:
        raise ValueError("PGM data must be 2-D")
    flipped = data[::-1]  # grid row 0 sits at im_min; files go top-down
    header = f"P5\n{data.shape[1]} {data.shape[0]}\n255\n".encode()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(flipped.tobytes())


def read_pgm(path) -> np.ndarray:
    """Read a binary PGM back into grid orientation (row 0 at im_min)."""
    with open(path, "rb") as fh:
        magic = fh.readline().strip()
        if magic != b"P5":
            raise ValueError("not a binary PGM")
        dims = fh.readline().split()
        width, height = int(dims[0]), int(dims[1])
        maxval = int(fh.readline())
        if maxval != 255:
            raise ValueError("only 8-bit PGM supported")
        raw = np.frombuffer(fh.read(width * height), dtype=np.uint8)
    return raw.reshape(height, width)[::-1].copy()
