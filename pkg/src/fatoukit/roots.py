"""Simultaneous polynomial root finding (Aberth-Ehrlich iteration).

All roots are refined together from deterministic initial guesses on a
perturbed circle of radius 1 + max |c_i / c_d| (the classical coefficient
bound).  No deflation, so clustered/multiple roots cannot drift; they
converge linearly and are collapsed afterwards by the caller's dedup
tolerance.
"""

from __future__ import annotations

import numpy as np

__all__ = ["aberth_roots", "polyval", "MAX_SWEEPS"]

MAX_SWEEPS = 100
_STEP_TOL = 1e-14
_INIT_PHASE = 0.4  # radians; breaks symmetry with the root constellation


def polyval(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Horner evaluation of ascending coefficients."""
    acc = np.zeros_like(z) + coeffs[-1]
    for c in coeffs[-2::-1]:
        acc = acc * z + c
    return acc


def aberth_roots(coeffs, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """All complex roots of the polynomial with ascending coefficients.

    Degree 0 inputs return an empty array.  Deterministic for fixed input.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    while len(c) > 1 and c[-1] == 0:
        c = c[:-1]
    d = len(c) - 1
    if d <= 0:
        return np.empty(0, dtype=np.complex128)
    if d == 1:
        return np.array([-c[0] / c[1]])

    dc = c[1:] * np.arange(1, d + 1)
    radius = 1.0 + np.max(np.abs(c[:-1] / c[-1]))
    k = np.arange(d)
    z = radius * np.exp(1j * (2 * np.pi * k / d + _INIT_PHASE + 0.13 * k / d))

    with np.errstate(all="ignore"):
        for _ in range(max_sweeps):
            p = polyval(c, z)
            dp = polyval(dc, z)
            newton = np.where(dp != 0, p / np.where(dp == 0, 1.0, dp), 0.0)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            sums = (1.0 / diff).sum(axis=1)
            denom = 1.0 - newton * sums
            step = np.where(np.abs(denom) > 1e-300, newton / denom, newton)
            step = np.where(np.isfinite(step), step, 0.0)
            z = z - step
            if np.max(np.abs(step)) < _STEP_TOL * (1.0 + np.max(np.abs(z))):
                break
    return z
