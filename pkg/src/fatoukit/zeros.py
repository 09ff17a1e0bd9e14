"""Detectors for non-uniform escape at truncation scale.

A pixel can satisfy the pointwise escape certificate while the family still
fails to tend to infinity uniformly near it.  At a finite truncation that
shows up in two computable ways, both scanned over the members of each
infinite part's last full window:

* tail zeros: a member of the tail has a zero inside the pixel's 3x3 box
  (zeros of later and later members drifting into every neighborhood of the
  point).  Located by damped Newton runs from candidate pixel centers; a
  candidate is kept only while the Newton step |f/f'| contracts, which
  rejects zero-free escapers such as pure exponentials.

* modulus contrast: one tail member is simultaneously small (<= low bar)
  and huge (>= high bar) across the box, so its modulus cannot be tending
  to infinity uniformly there.

Pixels flagged here are escape-dominated but cannot be certified normal;
the classifier downgrades them from FATOU to UNDECIDED.
"""

from __future__ import annotations

import numpy as np

from . import backends as bk
from .engine import EnumeratedPart, maxfilter, minfilter
from .tape import compile_expr
from .window import Window

__all__ = ["nonuniform_flags", "newton_zeros"]

_NEWTON_ITERS = 14
_CAND_FACTOR = 2.0     # candidate gate: |f/f'| <= factor * pixel
_SHRINK = 0.7          # keep while the step shrinks at least this fast
_ACCEPT = 1e-3         # accept when |f/f'| < accept * pixel
_WANDER = 6.0          # drop after drifting this many pixels


def newton_zeros(tape_f, tape_d, seeds: np.ndarray, h: float) -> np.ndarray:
    """Zeros of f reachable from seed points by contracting Newton steps.

    Returns the accepted zero locations (complex array, possibly empty).
    Only simple and low-multiplicity zeros contract fast enough to pass;
    functions without zeros nearby never do.
    """
    with np.errstate(all="ignore"):
        v, fl = bk.eval_points(tape_f, seeds)
        dv, dfl = bk.eval_points(tape_d, seeds)
        exact = (v == 0) & (fl == bk.FLAG_OK)
        found = [seeds[exact]]
        step = np.where(dv == 0, np.inf, v / np.where(dv == 0, 1.0, dv))
        s = np.abs(step)
        alive = (s <= _CAND_FACTOR * h) & ~exact & (fl == bk.FLAG_OK) \
            & (dfl == bk.FLAG_OK)
        z = seeds[alive] - step[alive]
        z0 = seeds[alive]
        s_prev = s[alive]
        for _ in range(_NEWTON_ITERS):
            if z.size == 0:
                break
            v, fl = bk.eval_points(tape_f, z)
            dv, dfl = bk.eval_points(tape_d, z)
            exact = (v == 0) & (fl == bk.FLAG_OK)
            found.append(z[exact])
            step = np.where(dv == 0, np.inf, v / np.where(dv == 0, 1.0, dv))
            s = np.abs(step)
            done = (s < _ACCEPT * h) & ~exact & (fl == bk.FLAG_OK)
            found.append(z[done] - step[done])
            keep = (~exact & ~done
                    & (fl == bk.FLAG_OK) & (dfl == bk.FLAG_OK)
                    & (s <= _SHRINK * s_prev)
                    & (np.abs(z - z0) <= _WANDER * h)
                    & np.isfinite(s))
            z = z[keep] - step[keep]
            z0 = z0[keep]
            s_prev = s[keep]
    return np.concatenate(found) if found else np.empty(0, np.complex128)


def _tail_members(part: EnumeratedPart, window_len: int):
    n_full = len(part.members) // window_len
    if n_full < 1:
        return []
    start = (n_full - 1) * window_len
    return part.members[start:start + window_len]


def nonuniform_flags(parts: list[EnumeratedPart], w: Window,
                     window_len: int, contrast_low: float,
                     contrast_high: float) -> np.ndarray:
    """Boolean (H, W) map of pixels with tail-zero or modulus-contrast hits."""
    centers = w.centers()
    h = w.pixel_scale
    hit = np.zeros(centers.shape, dtype=bool)
    for part in parts:
        if not part.infinite:
            continue
        for m in _tail_members(part, window_len):
            tf = compile_expr(m.expr)
            td = compile_expr(m.derivative)
            with np.errstate(all="ignore"):
                val, fl = bk.eval_points(tf, centers)
                mag = np.abs(val)
                mag[fl != bk.FLAG_OK] = np.inf
            # modulus contrast across the 3x3 box of one member
            boxmin = minfilter(mag, 1)
            boxmax = maxfilter(mag, 1)
            hit |= (boxmin <= contrast_low) & (boxmax >= contrast_high)
            # tail zeros inside the 3x3 box
            for zero in newton_zeros(tf, td, centers.ravel(), h):
                row, col = w.pixel_of(zero)
                if w.contains(zero):
                    hit[max(row - 1, 0):row + 2, max(col - 1, 0):col + 2] = True
    return hit
