"""Common fixed points, multiplier spectra and limit-function estimates.

A fixed point of a family must be fixed by every sampled member; the class
requires the same verdict from every multiplier (mixed spectra report MIXED
rather than a majority vote).  Limit functions are detected along the
canonical enumeration only; subsequential limits are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import backends as bk
from . import expr as ex
from .escape import EscapeParams
from .family import FamilySpec, enumerate_members
from .tape import compile_expr
from .window import Window

__all__ = ["FixedPointRecord", "LimitFunctionEstimate",
    "CLASS_ATTRACTING", "CLASS_SUPER_ATTRACTING", "CLASS_REPELLING",
    "CLASS_INDIFFERENT", "CLASS_MIXED",
    "find_fixed_points", "multiplier_spectrum", "limit_functions",
    "check_constant_limit_fixed", "FixedPointPreconditionError"]

CLASS_ATTRACTING = "ATTRACTING"
CLASS_SUPER_ATTRACTING = "SUPER_ATTRACTING"
CLASS_REPELLING = "REPELLING"
CLASS_INDIFFERENT = "INDIFFERENT"
CLASS_MIXED = "MIXED"

RESIDUAL_TOL = 1e-8
SUPER_TOL = 1e-9
UNIT_BAND = 1e-6
_NEWTON_SEEDS = 32
_NEWTON_ITERS = 50
_DEDUP = 1e-6


class FixedPointPreconditionError(ValueError):
    def __init__(self, residual: float):
        super().__init__(f"point is not fixed (residual {residual:.3e})")
        self.residual = residual


@dataclass
class FixedPointRecord:
    location: complex
    multipliers: list[complex]
    cls: str
    residual: float

    def to_dict(self):
        return {"location": [self.location.real, self.location.imag],
                "class": self.cls,
                "multipliers": [[m.real, m.imag] for m in self.multipliers],
                "residual": self.residual}


def _classify(multipliers) -> str:
    mods = [abs(l) for l in multipliers]
    if all(m < SUPER_TOL for m in mods):
        return CLASS_SUPER_ATTRACTING
    if all(m < 1.0 - UNIT_BAND for m in mods):
        return CLASS_ATTRACTING
    if all(m > 1.0 + UNIT_BAND for m in mods):
        return CLASS_REPELLING
    if all(abs(m - 1.0) <= UNIT_BAND for m in mods):
        return CLASS_INDIFFERENT
    return CLASS_MIXED


def _residual(members, z0: complex) -> float:
    worst = 0.0
    for m in members:
        val, flag = ex.evaluate_ex(m.expr, z0)
        if flag != ex.OK:
            return float("inf")
        worst = max(worst, abs(val - z0))
    return worst


def _record(members, z0: complex) -> FixedPointRecord:
    lams = []
    for m in members:
        dval, dflag = ex.evaluate_ex(m.derivative, z0)
        lams.append(dval if dflag == ex.OK else complex("inf"))
    return FixedPointRecord(z0, lams, _classify(lams), _residual(members, z0))


def find_fixed_points(spec: FamilySpec, w: Window,
                      n_check: int = 12) -> list[FixedPointRecord]:
    """Common fixed points of the first n_check members inside the window.

    Newton runs on (first member)(z) - z from a coarse seed lattice; a
    converged point is kept only when every sampled member fixes it to the
    residual tolerance.  Diverged seeds are dropped silently.
    """
    if n_check < 2:
        raise ValueError("n_check must be >= 2")
    members = enumerate_members(spec, n_check)
    if not members:
        return []
    f1 = members[0]
    tf = compile_expr(f1.expr)
    td = compile_expr(f1.derivative)

    re = np.linspace(w.re_min, w.re_max, _NEWTON_SEEDS)
    im = np.linspace(w.im_min, w.im_max, _NEWTON_SEEDS)
    z = (re[None, :] + 1j * im[:, None]).ravel()
    with np.errstate(all="ignore"):
        for _ in range(_NEWTON_ITERS):
            val, fl = bk.eval_points(tf, z)
            dval, dfl = bk.eval_points(td, z)
            g = val - z
            dg = dval - 1.0
            step = np.where(dg != 0, g / np.where(dg == 0, 1.0, dg), 0.0)
            bad = (fl != bk.FLAG_OK) | (dfl != bk.FLAG_OK) | ~np.isfinite(step)
            step = np.where(bad, 0.0, step)
            z = z - step
        val, fl = bk.eval_points(tf, z)
        resid = np.abs(val - z)
        ok = (fl == bk.FLAG_OK) & np.isfinite(z) & \
            (resid < 1e-10 * (1.0 + np.abs(z)))
    candidates = sorted(z[ok], key=lambda v: (v.real, v.imag))

    found: list[FixedPointRecord] = []
    for z0 in candidates:
        if not w.contains(z0):
            continue
        if any(abs(z0 - r.location) <= _DEDUP for r in found):
            continue
        if _residual(members, z0) < RESIDUAL_TOL:
            found.append(_record(members, z0))
    return found


def multiplier_spectrum(spec: FamilySpec, z0: complex,
                        n_check: int = 12) -> FixedPointRecord:
    """Multipliers f'(z0) over the first n_check members, with the class.

    Raises FixedPointPreconditionError when z0 is not fixed by all of them.
    """
    members = enumerate_members(spec, n_check)
    resid = _residual(members, z0)
    if resid >= RESIDUAL_TOL:
        raise FixedPointPreconditionError(resid)
    return _record(members, z0)


@dataclass
class LimitFunctionEstimate:
    kind: str                      # FINITE | INFINITY | NONE
    probes: list[complex]
    values: list[complex] | None
    cauchy_defect: float
    warnings: list[str] = field(default_factory=list)

    def to_dict(self):
        return {"kind": self.kind,
                "probes": [[p.real, p.imag] for p in self.probes],
                "values": None if self.values is None else
                [[v.real, v.imag] for v in self.values],
                "cauchy_defect": self.cauchy_defect,
                "warnings": self.warnings}


_CAUCHY_TOL = 1e-6


def limit_functions(spec: FamilySpec, component_probes,
                    p: EscapeParams) -> LimitFunctionEstimate:
    """Limit behavior along the canonical enumeration at the probe points.

    FINITE when the tail of successive sups |f_k - f_{k+1}| sinks below the
    Cauchy tolerance (values = last member's probe values); INFINITY when
    every tail-window magnitude clears the escape radius; NONE otherwise
    (no locally uniform limit detected along this enumeration).
    """
    probes = [complex(q) for q in component_probes]
    if not probes:
        raise ValueError("need at least one probe point")
    members = enumerate_members(spec, p.n_max)
    if len(members) < 2:
        raise ValueError("family truncation has fewer than two members")
    pts = np.asarray(probes, dtype=np.complex128)

    vals = np.empty((len(members), len(probes)), dtype=np.complex128)
    mags = np.empty((len(members), len(probes)))
    ok = np.ones(len(members), dtype=bool)
    for k, m in enumerate(members):
        v, fl = bk.eval_points(compile_expr(m.expr), pts)
        vals[k] = v
        mags[k] = np.where(fl == bk.FLAG_OK, np.abs(v), np.inf)
        ok[k] = bool((fl == bk.FLAG_OK).all())

    tail = min(p.tail_window, len(members) - 1)
    sups = np.array([np.max(np.abs(vals[k + 1] - vals[k]))
                     if ok[k] and ok[k + 1] else np.inf
                     for k in range(len(members) - 1)])
    tail_sups = sups[-tail:]
    if np.all(tail_sups < _CAUCHY_TOL):
        return LimitFunctionEstimate("FINITE", probes, list(vals[-1]),
                                     float(tail_sups.max()))
    if np.all(mags[-tail:] > p.escape_radius):
        return LimitFunctionEstimate("INFINITY", probes, None,
                                     float(tail_sups.min()))
    return LimitFunctionEstimate("NONE", probes, None,
                                 float(tail_sups.min()))


def check_constant_limit_fixed(spec: FamilySpec, c: complex,
                               n_check: int = 12):
    """PASS iff every sampled member fixes c; members must commute.

    Returns (verdict, offenders): verdict in {"PASS", "FAIL",
    "HYPOTHESIS_NOT_MET"}; offenders lists labels of members that move c
    (or the non-commuting pair when the hypothesis fails).
    """
    from .family import PROBE_POINTS

    members = enumerate_members(spec, n_check)
    probes = PROBE_POINTS[:8]
    for i in range(min(len(members), 4)):
        for j in range(i + 1, min(len(members), 4)):
            f, g = members[i], members[j]
            for q in probes:
                gq, flg = ex.evaluate_ex(g.expr, q)
                fq, flf = ex.evaluate_ex(f.expr, q)
                if flg != ex.OK or flf != ex.OK:
                    continue
                fg, fl1 = ex.evaluate_ex(f.expr, gq)
                gf, fl2 = ex.evaluate_ex(g.expr, fq)
                if fl1 != ex.OK or fl2 != ex.OK:
                    continue
                if abs(fg - gf) > 1e-8 * (1.0 + abs(fg)):
                    return "HYPOTHESIS_NOT_MET", [f.label, g.label]
    offenders = []
    for m in members:
        val, flag = ex.evaluate_ex(m.expr, c)
        if flag != ex.OK or abs(val - c) >= 1e-8:
            offenders.append(m.label)
    return ("PASS", []) if not offenders else ("FAIL", offenders)
