"""Rectangular analysis windows with pixel grids and optional disk masks.

Pixel (col i, row j) covers the cell
[re_min + i*hx, re_min + (i+1)*hx] x [im_min + j*hy, im_min + (j+1)*hy]
and is sampled at the cell center.  Arrays are indexed [row, col] with row 0
at im_min; raster writers flip to image convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["DiskMask", "Window"]


@dataclass(frozen=True)
class DiskMask:
    center: complex
    radius: float


@dataclass(frozen=True)
class Window:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    width: int
    height: int
    disk: DiskMask | None = None

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("window bounds must be ordered")
        if self.width < 1 or self.height < 1:
            raise ValueError("grid must have positive size")

    @property
    def hx(self) -> float:
        return (self.re_max - self.re_min) / self.width

    @property
    def hy(self) -> float:
        return (self.im_max - self.im_min) / self.height

    @property
    def pixel_scale(self) -> float:
        """The larger cell edge; 'k pixels' tolerances are k * pixel_scale."""
        return max(self.hx, self.hy)

    def centers(self) -> np.ndarray:
        """Complex grid (height, width) of cell centers."""
        re = self.re_min + (np.arange(self.width) + 0.5) * self.hx
        im = self.im_min + (np.arange(self.height) + 0.5) * self.hy
        return re[None, :] + 1j * im[:, None]

    def corners(self) -> np.ndarray:
        """Complex lattice (height+1, width+1) of cell corners."""
        re = self.re_min + np.arange(self.width + 1) * self.hx
        im = self.im_min + np.arange(self.height + 1) * self.hy
        return re[None, :] + 1j * im[:, None]

    def mask(self) -> np.ndarray:
        """Boolean (height, width): True where the pixel belongs to the domain."""
        if self.disk is None:
            return np.ones((self.height, self.width), dtype=bool)
        return np.abs(self.centers() - self.disk.center) < self.disk.radius

    def pixel_of(self, z: complex) -> tuple[int, int]:
        """(row, col) of the cell containing z, clamped to the grid."""
        col = int(np.floor((z.real - self.re_min) / self.hx))
        row = int(np.floor((z.imag - self.im_min) / self.hy))
        return (min(max(row, 0), self.height - 1),
                min(max(col, 0), self.width - 1))

    def contains(self, z: complex) -> bool:
        inside = (self.re_min <= z.real <= self.re_max
                  and self.im_min <= z.imag <= self.im_max)
        if inside and self.disk is not None:
            inside = abs(z - self.disk.center) < self.disk.radius
        return inside

    def center_of(self, row: int, col: int) -> complex:
        return complex(self.re_min + (col + 0.5) * self.hx,
                       self.im_min + (row + 0.5) * self.hy)
