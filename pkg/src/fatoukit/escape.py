"""Escaping-set membership (I) and generalized escaping membership (U).

Divergence to infinity is certified from a finite truncation by a growth
trend: per-part window minima (for I) or maxima (for U) must clear a floor
radius and keep increasing by at least a relative margin across the trailing
windows.  An absolute bar alone cannot work at desk-scale truncations:
linear-growth families cap near n_max * |z| while bounded families can sit
arbitrarily high, so the trend carries the certificate and the floor only
rejects noise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import engine
from .family import FamilySpec
from .window import Window

__all__ = ["EscapeParams", "EscapeProfile", "escape_profile",
           "classify_I", "classify_U", "classify_escape",
           "check_algebra_laws", "LawResult", "LawReport"]

WARN_VACUOUS = "VACUOUS"
WARN_NO_WINDOWS = "TOO_FEW_WINDOWS"
WARN_SHORT_PART = "SHORT_PART"


@dataclass(frozen=True)
class EscapeParams:
    n_max: int = 256
    escape_radius: float = 2.0
    tail_window: int = 32
    u_hits: int = 4
    growth_margin: float = 0.05

    def __post_init__(self):
        if self.tail_window > self.n_max:
            raise ValueError("tail_window must not exceed n_max")
        if self.u_hits < 2:
            raise ValueError("u_hits must be >= 2")
        if self.growth_margin < 0:
            raise ValueError("growth_margin must be >= 0")


@dataclass
class PartProfile:
    label: str
    infinite: bool
    magnitudes: np.ndarray      # |f_k(z)| in enumeration order; +inf markers
    window_min: np.ndarray
    window_max: np.ndarray


@dataclass
class EscapeProfile:
    parts: list[PartProfile] = field(default_factory=list)
    pole_seen: bool = False


def escape_profile(spec: FamilySpec, z: complex, p: EscapeParams) -> EscapeProfile:
    """Per-member magnitudes at one point, kept separate per part."""
    from . import backends as bk
    from .tape import compile_expr

    parts = engine.enumerate_parts(spec, p.n_max)
    prof = EscapeProfile()
    pt = np.array([z], dtype=np.complex128)
    for part in parts:
        mags = np.empty(len(part.members))
        for k, m in enumerate(part.members):
            val, fl = bk.eval_points(compile_expr(m.expr), pt)
            if fl[0] != bk.FLAG_OK:
                mags[k] = np.inf
                if fl[0] == bk.FLAG_POLE:
                    prof.pole_seen = True
            else:
                mags[k] = abs(val[0])
        W = p.tail_window
        nw = max(1, -(-len(mags) // W)) if len(mags) else 1
        wmin = np.full(nw, np.inf)
        wmax = np.full(nw, -1.0)
        for k, v in enumerate(mags):
            wmin[k // W] = min(wmin[k // W], v)
            wmax[k // W] = max(wmax[k // W], v)
        prof.parts.append(PartProfile(part.label, part.infinite, mags,
                                      wmin, wmax))
    return prof


# ---------------------------------------------------------------------------
# per-pixel certificates from sweep statistics
# ---------------------------------------------------------------------------

def _part_window_count(part: engine.EnumeratedPart, W: int) -> int:
    return -(-len(part.members) // W) if part.members else 0


def _i_certificate(wmin: np.ndarray, last: int, p: EscapeParams) -> np.ndarray:
    """wmin: (n_windows, ...) window minima of one part; last = index of the
    part's final fully populated window."""
    tail = wmin[last]
    prev = wmin[last - 1]
    ok = tail > p.escape_radius
    ok &= tail >= prev * (1.0 + p.growth_margin)
    return ok


def _u_certificate(wmax: np.ndarray, nw: int, p: EscapeParams) -> np.ndarray:
    """wmax: (n_windows, ...) window maxima of one part (first nw valid)."""
    R = p.escape_radius
    g = 1.0 + p.growth_margin
    exceed = wmax[:nw] > R
    count = exceed.sum(axis=0)
    ok = count >= p.u_hits
    ok &= exceed[nw - 1]
    # the exceeding subsequence must keep growing by the margin
    running = np.where(exceed[0], wmax[0], -1.0)
    grown = np.ones(ok.shape, dtype=bool)
    for w in range(1, nw):
        e = exceed[w]
        seen = running >= 0
        grown &= ~(e & seen) | (wmax[w] >= running * g)
        running = np.where(e, wmax[w], running)
    return ok & grown


def classify_escape(spec: FamilySpec, w: Window, p: EscapeParams,
                    parts=None, stats=None, n_windows=None):
    """(in_I, in_U, warnings) boolean maps over the window's pixel centers.

    in_I: every infinite part certifies escape at the pixel (finite parts
    carry no infinite sequences and are skipped).  in_U: some part certifies;
    in_I forces in_U.  A spec without infinite parts yields a vacuously true
    I map and an all-false U map, both flagged.
    """
    if parts is None:
        parts = engine.enumerate_parts(spec, p.n_max)
    if stats is None:
        stats, n_windows = engine.sweep(parts, w.centers(), p.tail_window)
    warnings = []
    shape = stats.pole_any.shape
    infinite = [i for i, part in enumerate(parts) if part.infinite]

    if not infinite:
        warnings.append(WARN_VACUOUS)
        in_i = np.ones(shape, dtype=bool)
        in_u = np.zeros(shape, dtype=bool)
        warnings.append(WARN_NO_WINDOWS)
        return in_i, in_u, warnings

    in_i = np.ones(shape, dtype=bool)
    in_u = np.zeros(shape, dtype=bool)
    for i in infinite:
        nw = _part_window_count(parts[i], p.tail_window)
        if len(parts[i].members) < 2 * p.tail_window:
            warnings.append(f"{WARN_SHORT_PART}:{parts[i].label}")
            in_i[:] = False
            in_u |= _u_certificate(stats.mag_wmax[i], nw, p)
            continue
        last = len(parts[i].members) // p.tail_window - 1  # last full window
        cert_i = _i_certificate(stats.mag_wmin[i], last, p)
        in_i &= cert_i
        # a part whose every sequence escapes certainly has some escaping
        # sequence, so the part-level I certificate feeds U; keeping the
        # implication at part level makes U(a|b) == U(a) | U(b) exact
        in_u |= _u_certificate(stats.mag_wmax[i], nw, p) | cert_i
    return in_i, in_u, warnings


def point_membership(spec: FamilySpec, z: complex, p: EscapeParams):
    """(in_I, in_U, warnings) at a single point, from the escape profile."""
    parts = engine.enumerate_parts(spec, p.n_max)
    pts = np.array([z], dtype=np.complex128)
    stats, nw = engine.sweep(parts, pts, p.tail_window)
    in_i, in_u, warnings = classify_escape(spec, None, p, parts=parts,
                                           stats=stats, n_windows=nw)
    return bool(in_i[0]), bool(in_u[0]), warnings


def classify_I(spec: FamilySpec, w: Window, p: EscapeParams):
    """Boolean escaping-set map on pixel centers (with warnings)."""
    in_i, _, warnings = classify_escape(spec, w, p)
    return in_i, warnings


def classify_U(spec: FamilySpec, w: Window, p: EscapeParams):
    """Boolean generalized-escaping-set map on pixel centers (with warnings)."""
    _, in_u, warnings = classify_escape(spec, w, p)
    return in_u, warnings


# ---------------------------------------------------------------------------
# set-algebra law checks
# ---------------------------------------------------------------------------

@dataclass
class LawResult:
    name: str
    status: str          # holds | violated | strict_inclusion | equality |
                         # hypothesis_not_met | skipped
    violations: int = 0
    strict_extra: int = 0
    note: str = ""

    def to_dict(self):
        return {"name": self.name, "status": self.status,
                "violations": self.violations,
                "strict_extra": self.strict_extra, "note": self.note}


@dataclass
class LawReport:
    laws: list[LawResult] = field(default_factory=list)

    def to_dict(self):
        return {"laws": [r.to_dict() for r in self.laws]}

    def by_name(self, name: str) -> LawResult:
        for r in self.laws:
            if r.name == name:
                return r
        raise KeyError(name)


_PAIRWISE_TRUNC = 16
_PAIRWISE_BUDGET = 1 << 27  # member-pixel evaluations


def _masked_count(mask: np.ndarray, band: np.ndarray, domain: np.ndarray) -> int:
    return int((mask & ~band & domain).sum())


def _pairwise_part(parts_a, parts_b, combine, label):
    """Members f op g over the truncations, diagonal order, marked infinite."""
    from . import expr as ex
    from .family import Member

    ma = [m for part in parts_a for m in part.members][:_PAIRWISE_TRUNC]
    mb = [m for part in parts_b for m in part.members][:_PAIRWISE_TRUNC]
    pairs = sorted(((max(i, j), i, j) for i in range(len(ma))
                    for j in range(len(mb))))
    members = []
    seen = set()
    from .family import fingerprint
    for _, i, j in pairs:
        m = Member(combine(ma[i].expr, mb[j].expr),
                   label=f"{label}[{i + 1},{j + 1}]")
        fp = fingerprint(m)
        if fp not in seen:
            seen.add(fp)
            members.append(m)
    return engine.EnumeratedPart(members, True, label)


def check_algebra_laws(a: FamilySpec, b: FamilySpec, w: Window,
                       p: EscapeParams, nparams=None) -> LawReport:
    """Check the monotonicity / union / intersection / sum / product laws.

    Laws a family pair can genuinely break are reported as findings, never
    as errors.  Violation counts exclude a 2-pixel band around each
    operand's I/U/F boundaries.
    """
    from . import expr as ex
    from .family import UnionSpec, intersect_families
    from .normality import NormalityParams, classify_normality

    if nparams is None:
        nparams = NormalityParams(n_max=p.n_max, window_len=p.tail_window,
                                  growth_margin=p.growth_margin)
    report = LawReport()
    domain = w.mask()

    ia, ua, _ = classify_escape(a, w, p)
    ib, ub, _ = classify_escape(b, w, p)
    union = UnionSpec((a, b))
    iu, uu, _ = classify_escape(union, w, p)

    band = np.zeros(domain.shape, dtype=bool)
    for m in (ia, ua, ib, ub):
        band |= engine.boundary_band(m, 2)

    # (1) monotonicity: a subset of a|b
    v1 = _masked_count(iu & ~ia, band, domain) + \
        _masked_count(ua & ~uu, band, domain)
    report.laws.append(LawResult("monotonicity", "holds" if v1 == 0 else
                                 "violated", v1))

    # (2) union laws
    v2 = _masked_count(iu ^ (ia & ib), band, domain) + \
        _masked_count(uu ^ (ua | ub), band, domain)
    report.laws.append(LawResult("union", "holds" if v2 == 0 else
                                 "violated", v2))

    # (3) intersection, escaping set
    inter = intersect_families(a, b, p.n_max)
    n_shared = len(inter.members)
    if n_shared >= 2 * p.tail_window:
        # shared members, marked as a truncation of the infinite intersection
        from .family import Member
        part = engine.EnumeratedPart([Member(e) for e in inter.members],
                                     True, "intersection")
        stats, nw = engine.sweep([part], w.centers(), p.tail_window)
        ii, ui, _ = classify_escape(None, w, p, parts=[part], stats=stats,
                                    n_windows=nw)
        viol = _masked_count((ia | ib) & ~ii, band, domain)
        extra = _masked_count(ii & ~(ia | ib), band, domain)
        status = "violated" if viol else (
            "strict_inclusion" if extra else "equality")
        report.laws.append(LawResult("intersection-I", status, viol, extra))
    else:
        ui = np.zeros(domain.shape, dtype=bool)
        report.laws.append(LawResult(
            "intersection-I", "hypothesis_not_met", 0, 0,
            f"shared truncation has {n_shared} members"))

    # (4) intersection, generalized escaping set
    if n_shared == 0:
        ui = np.zeros(domain.shape, dtype=bool)
    viol4 = _masked_count(ui & ~(ua & ub), band, domain)
    extra4 = _masked_count((ua & ub) & ~ui, band, domain)
    status4 = "violated" if viol4 else (
        "strict_inclusion" if extra4 else "equality")
    report.laws.append(LawResult("intersection-U", status4, viol4, extra4))

    # (a)-(d): pairwise sums and products of the truncations
    parts_a = engine.enumerate_parts(a, _PAIRWISE_TRUNC)
    parts_b = engine.enumerate_parts(b, _PAIRWISE_TRUNC)
    n_pixels = int(domain.size)
    if _PAIRWISE_TRUNC * _PAIRWISE_TRUNC * n_pixels > _PAIRWISE_BUDGET:
        for name in ("sum-F", "sum-I", "product-F", "product-I"):
            report.laws.append(LawResult(name, "skipped", 0, 0,
                                         "pairwise truncation over budget"))
        return report

    fa = classify_normality(a, w, nparams).fatou_mask()
    fb = classify_normality(b, w, nparams).fatou_mask()

    for name, combine, f_ref, i_ref in (
            ("sum", ex.add, fa & fb, ia & ib),
            ("product", ex.mul, fa | fb, ia | ib)):
        part = _pairwise_part(parts_a, parts_b, combine, name)
        spec_like = [part]
        stats, nw = engine.sweep(spec_like, w.centers(), p.tail_window)
        ip, up, _ = classify_escape(None, w, p, parts=spec_like, stats=stats,
                                    n_windows=nw)
        cls = classify_normality(None, w, nparams, parts=spec_like)
        fband = band | engine.boundary_band(f_ref, 2) | \
            engine.boundary_band(cls.fatou_mask(), 2)
        vf = _masked_count(cls.fatou_mask() ^ f_ref, fband, domain)
        report.laws.append(LawResult(
            f"{name}-F", "holds" if vf == 0 else "violated", vf))
        vi = _masked_count(ip & ~i_ref, band | engine.boundary_band(ip, 2),
                           domain)
        report.laws.append(LawResult(
            f"{name}-I", "holds" if vi == 0 else "violated", vi))
    return report
