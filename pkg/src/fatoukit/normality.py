"""Fatou/Julia classification via a Marty-criterion surrogate.

Normality of a truncated family at a grid point is judged from spherical
derivatives |f'| / (1 + |f|^2) sampled over the pixel's neighborhood (both
the 3x3 block of cell centers and the block's corner lattice, so grid-aligned
special points are sampled exactly):

* JULIA:  the score clears the threshold AND the per-window maxima keep
  growing through the trailing windows (non-normality visibly driven by the
  tail of the family);
* FATOU:  bounded score and no growth trend;
* UNDECIDED: the two indicators disagree, or the pixel escapes pointwise
  while a tail member has a zero or an extreme modulus swing inside the
  pixel box (escape that is not locally uniform - see zeros.py).

The threshold defaults to n_max / 4: spherical derivatives of the reference
families peak at the truncation depth on their Julia sets (n*z at 0 reaches
exactly n_max) and at most half that elsewhere, so a quarter splits the two
regimes with a factor-two margin on either side.  Members that overflow
contribute spherical derivative 0 (locally uniform convergence to infinity
is normal behavior).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import engine
from . import expr as ex
from .escape import EscapeParams, classify_escape
from .family import FamilySpec, Member
from .window import Window
from .zeros import nonuniform_flags

__all__ = ["NormalityParams", "ClassificationMap", "MartyScore",
           "LABEL_JULIA", "LABEL_UNDECIDED", "LABEL_FATOU", "LABEL_MASKED",
           "spherical_derivative", "marty_score", "classify_normality"]

LABEL_JULIA = 0
LABEL_UNDECIDED = 1
LABEL_FATOU = 2
LABEL_MASKED = 3


@dataclass(frozen=True)
class NormalityParams:
    n_max: int = 256
    window_len: int = 32
    marty_threshold: float | None = None   # None resolves to n_max / 4
    growth_windows: int = 3
    neighborhood_radius_px: int = 1
    growth_margin: float = 0.05
    detect_nonuniform: bool = True
    contrast_low: float = 10.0
    contrast_high: float = 100.0

    def __post_init__(self):
        if self.window_len > self.n_max:
            raise ValueError("window_len must not exceed n_max")
        if (self.growth_windows + 1) * self.window_len > self.n_max:
            raise ValueError("growth trend needs (growth_windows+1) full "
                             "windows within n_max")

    def resolved_threshold(self) -> float:
        if self.marty_threshold is not None:
            return self.marty_threshold
        return self.n_max / 4.0


@dataclass
class MartyScore:
    score: float
    growing: bool


@dataclass
class ClassificationMap:
    labels: np.ndarray        # (H, W) uint8, LABEL_*
    marty: np.ndarray         # (H, W) float, neighborhood score
    growing: np.ndarray       # (H, W) bool
    in_i: np.ndarray          # (H, W) bool
    in_u: np.ndarray          # (H, W) bool
    escape_stat: np.ndarray   # (H, W) float, binding tail-window minimum
    warnings: list[str] = field(default_factory=list)

    def julia_mask(self) -> np.ndarray:
        return self.labels == LABEL_JULIA

    def fatou_mask(self) -> np.ndarray:
        return self.labels == LABEL_FATOU

    def undecided_mask(self) -> np.ndarray:
        return self.labels == LABEL_UNDECIDED

    def folded_julia_mask(self) -> np.ndarray:
        """UNDECIDED folded into JULIA (conservative topology mask)."""
        return (self.labels == LABEL_JULIA) | (self.labels == LABEL_UNDECIDED)

    def domain_mask(self) -> np.ndarray:
        return self.labels != LABEL_MASKED

    def counts(self) -> dict:
        return {"julia": int(self.julia_mask().sum()),
                "undecided": int(self.undecided_mask().sum()),
                "fatou": int(self.fatou_mask().sum()),
                "masked": int((self.labels == LABEL_MASKED).sum())}


def spherical_derivative(m: Member, z: complex) -> float:
    """|f'(z)| / (1 + |f(z)|^2); 0 when |f| overflows; PoleError on poles."""
    val, flag = ex.evaluate_ex(m.expr, z)
    if flag == ex.POLE:
        raise ex.PoleError("pole at sample point")
    if flag == ex.ESCAPED:
        return 0.0
    dval, dflag = ex.evaluate_ex(m.derivative, z)
    if dflag == ex.POLE:
        raise ex.PoleError("pole of derivative at sample point")
    if dflag == ex.ESCAPED:
        return 0.0
    denom = 1.0 + abs(val) ** 2
    sph = abs(dval) / denom
    return sph if np.isfinite(sph) else 0.0


def _growing(sph_wmax: np.ndarray, n_windows: int, g: int,
             margin: float) -> np.ndarray:
    """Trailing-window growth trend of per-window spherical maxima."""
    shape = sph_wmax.shape[1:]
    if n_windows < g + 1:
        return np.zeros(shape, dtype=bool)
    out = np.ones(shape, dtype=bool)
    for j in range(g):
        hi = sph_wmax[n_windows - 1 - j]
        lo = sph_wmax[n_windows - 2 - j]
        out &= (hi > 0) & (lo >= 0) & (hi >= lo * (1.0 + margin))
    return out


def marty_score(spec: FamilySpec, z: complex, p: NormalityParams,
                neighborhood=()) -> MartyScore:
    """Score and growth flag at a point (plus optional extra samples)."""
    pts = np.asarray([z, *neighborhood], dtype=np.complex128)
    parts = engine.enumerate_parts(spec, p.n_max)
    stats, nw = engine.sweep(parts, pts, p.window_len, want_mag=False)
    score = float(np.max(stats.sph_wmax))
    growing = bool(_growing(stats.sph_wmax, nw, p.growth_windows,
                            p.growth_margin).any())
    return MartyScore(max(score, 0.0), growing)


def classify_normality(spec: FamilySpec | None, w: Window, p: NormalityParams,
                       eparams: EscapeParams | None = None,
                       parts=None) -> ClassificationMap:
    """Per-pixel FATOU / JULIA / UNDECIDED labels plus escape bits.

    Deterministic for fixed (spec, window, params, backend).
    """
    if parts is None:
        parts = engine.enumerate_parts(spec, p.n_max)
    if eparams is None:
        eparams = EscapeParams(n_max=p.n_max, tail_window=p.window_len,
                               growth_margin=p.growth_margin)
    if eparams.tail_window != p.window_len:
        raise ValueError("escape tail_window must match normality window_len")

    centers = w.centers()
    corners = w.corners()
    stats_c, nw = engine.sweep(parts, centers, p.window_len, want_mag=True)
    stats_k, nwk = engine.sweep(parts, corners, p.window_len, want_mag=False)

    r = p.neighborhood_radius_px
    score_c = np.max(stats_c.sph_wmax, axis=0)
    score_k = np.max(stats_k.sph_wmax, axis=0)
    score = np.maximum(engine.maxfilter(score_c, r),
                       engine.corner_cell_max(score_k, r))
    score = np.maximum(score, 0.0)

    grow_c = _growing(stats_c.sph_wmax, nw, p.growth_windows, p.growth_margin)
    grow_k = _growing(stats_k.sph_wmax, nwk, p.growth_windows, p.growth_margin)
    growing = engine.orfilter(grow_c, r) | \
        engine.corner_cell_max(grow_k, r).astype(bool)

    threshold = p.resolved_threshold()
    julia = (score > threshold) & growing
    fatou = (score <= threshold) & ~growing

    labels = np.full(centers.shape, LABEL_UNDECIDED, dtype=np.uint8)
    labels[fatou] = LABEL_FATOU
    labels[julia] = LABEL_JULIA

    in_i, in_u, warnings = classify_escape(
        spec, w, eparams, parts=parts, stats=stats_c, n_windows=nw)

    if p.detect_nonuniform:
        flags = nonuniform_flags(parts, w, p.window_len,
                                 p.contrast_low, p.contrast_high)
        downgrade = (labels == LABEL_FATOU) & in_u & flags
        labels[downgrade] = LABEL_UNDECIDED

    # binding escape statistic: worst infinite part's tail-window minimum
    stat = np.full(centers.shape, np.inf)
    for i, part in enumerate(parts):
        if not part.infinite or not part.members:
            continue
        last = max(len(part.members) // p.window_len - 1, 0)
        stat = np.minimum(stat, stats_c.mag_wmin[i, last])

    mask = w.mask()
    labels[~mask] = LABEL_MASKED
    in_i = in_i & mask
    in_u = in_u & mask
    stat = np.where(mask, stat, np.nan)

    return ClassificationMap(labels, score, growing, in_i, in_u, stat,
                             warnings)
