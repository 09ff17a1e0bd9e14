"""Shared machinery between the normality and escape engines.

A family spec is enumerated into flat *parts* (each a list of concrete
members plus an is-infinite flag); the backends fold per-member magnitude
and spherical-derivative statistics into per-window reductions over any
point lattice.  Small grid stencil helpers live here too.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backends as bk
from .family import (FamilySpec, Member, enumerate_members, flatten_parts,
                     is_infinite_part, print_family)
from .tape import compile_expr

__all__ = ["EnumeratedPart", "enumerate_parts", "sweep", "maxfilter",
           "minfilter", "orfilter", "corner_cell_max", "boundary_band"]


@dataclass
class EnumeratedPart:
    members: list[Member]
    infinite: bool
    label: str


def enumerate_parts(spec: FamilySpec, n_max: int) -> list[EnumeratedPart]:
    """Flatten a spec and truncate every part to at most n_max members."""
    out = []
    for part in flatten_parts(spec):
        members = enumerate_members(part, n_max) if n_max >= 1 else []
        out.append(EnumeratedPart(members, is_infinite_part(part),
                                  print_family(part)))
    return out


def _tape_table(parts: list[EnumeratedPart], window_len: int):
    tapes_f, tapes_d, part_ids, win_ids = [], [], [], []
    for pi, part in enumerate(parts):
        for j, m in enumerate(part.members):
            tapes_f.append(compile_expr(m.expr))
            tapes_d.append(compile_expr(m.derivative))
            part_ids.append(pi)
            win_ids.append(j // window_len)
    if not tapes_f:
        return None, 0
    n_windows = max(win_ids) + 1
    return bk.build_tape_table(tapes_f, tapes_d, part_ids, win_ids), n_windows


def sweep(parts: list[EnumeratedPart], pts: np.ndarray, window_len: int,
          want_mag: bool = True):
    """Run the family sweep over a point array.

    Returns (SweepResult with arrays shaped (..., *pts.shape), n_windows).
    """
    table, n_windows = _tape_table(parts, window_len)
    if table is None:
        shape = pts.shape
        return bk.SweepResult(
            np.full((1,) + shape, -1.0),
            np.full((len(parts) or 1, 1) + shape, np.inf),
            np.full((len(parts) or 1, 1) + shape, -1.0),
            np.zeros(shape, dtype=bool)), 1
    res = bk.family_sweep(table, pts, len(parts), n_windows, want_mag)
    shape = pts.shape
    return bk.SweepResult(
        res.sph_wmax.reshape((n_windows,) + shape),
        res.mag_wmin.reshape((len(parts), n_windows) + shape),
        res.mag_wmax.reshape((len(parts), n_windows) + shape),
        res.pole_any.reshape(shape)), n_windows


# ---------------------------------------------------------------------------
# stencil helpers (edge-clamped)
# ---------------------------------------------------------------------------

def _filter(a: np.ndarray, radius: int, op) -> np.ndarray:
    if radius < 1:
        return a.copy()
    p = np.pad(a, radius, mode="edge")
    h, w = a.shape
    out = None
    for dy in range(2 * radius + 1):
        for dx in range(2 * radius + 1):
            block = p[dy:dy + h, dx:dx + w]
            out = block.copy() if out is None else op(out, block)
    return out


def maxfilter(a: np.ndarray, radius: int = 1) -> np.ndarray:
    return _filter(a, radius, np.maximum)


def minfilter(a: np.ndarray, radius: int = 1) -> np.ndarray:
    return _filter(a, radius, np.minimum)


def orfilter(a: np.ndarray, radius: int = 1) -> np.ndarray:
    return _filter(a.astype(bool), radius, np.logical_or)


def corner_cell_max(c: np.ndarray, radius: int = 1) -> np.ndarray:
    """Per-pixel max over the corner lattice of its (2r+1)^2 pixel block.

    c has shape (H+1, W+1); the result has shape (H, W).  The block of pixel
    (i, j) spans corner rows i-r .. i+r+1, so this is a (2r+2)-wide window.
    """
    own = np.maximum(np.maximum(c[:-1, :-1], c[:-1, 1:]),
                     np.maximum(c[1:, :-1], c[1:, 1:]))
    return maxfilter(own, radius)


def boundary_band(mask: np.ndarray, px: int) -> np.ndarray:
    """Pixels within Chebyshev distance px of the mask's boundary."""
    inner = orfilter(mask, px)
    outer = orfilter(~mask, px)
    return inner & outer
