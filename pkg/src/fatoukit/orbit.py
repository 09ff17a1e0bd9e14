"""Backward orbits, exceptional-point candidates and invariance audits.

Preimages are exact polynomial root sets (Aberth-Ehrlich on p(z) - w), so
backward orbits are restricted to polynomial members; transcendental
counterexamples are probed through forward images instead.  For semigroups
the breadth-first levels apply the *generators*, so depth k reaches exactly
the words of length <= k.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import engine
from .escape import EscapeParams, point_membership
from .family import (FamilySpec, Member, Semigroup, enumerate_members,
                     polynomial_form)
from .roots import aberth_roots, polyval
from .window import Window

__all__ = ["OrbitLimits", "PointSet", "NotSupportedError",
           "PreconditionError", "preimages", "backward_orbit",
           "exceptional_candidates", "check_backward_invariance",
           "check_forward_invariance", "check_generator_escape",
           "InvarianceReport"]

RESIDUAL_FACTOR = 1e-10


class NotSupportedError(RuntimeError):
    """No polynomial members available for root finding."""


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class OrbitLimits:
    n_pre: int = 64
    depth: int = 3
    dedup_tol: float = 1e-9
    max_points: int = 10000

    def __post_init__(self):
        for name in ("n_pre", "depth", "max_points"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.dedup_tol <= 0:
            raise ValueError("dedup_tol must be positive")


@dataclass
class PointSet:
    """Deduplicated complex points with provenance tags.

    Insertion keeps the first representative of each tolerance cluster;
    candidate batches are sorted lexicographically by (re, im) before
    insertion so the result is order-independent.
    """
    tol: float = 1e-9
    points: list[complex] = field(default_factory=list)
    provenance: list[str] = field(default_factory=list)
    flags: set[str] = field(default_factory=set)

    def add(self, z: complex, tag: str = "") -> bool:
        for q in self.points:
            if abs(z - q) <= self.tol:
                return False
        self.points.append(complex(z))
        self.provenance.append(tag)
        return True

    def add_batch(self, zs, tag: str = "") -> list[complex]:
        added = []
        for z in sorted(zs, key=lambda v: (v.real, v.imag)):
            if self.add(z, tag):
                added.append(complex(z))
        return added

    def min_distance_to(self, target: complex) -> float:
        if not self.points:
            return float("inf")
        return min(abs(p - target) for p in self.points)

    def __len__(self):
        return len(self.points)


# multiplicity collapse: a residual bound of 1e-10 localizes an m-fold root
# only to ~1e-10^(1/m), so doubles need a coarser merge than dedup_tol
_MULTIPLICITY_TOL = 1e-7


def preimages(m: Member, w: complex, dedup_tol: float = 1e-9) -> list[complex]:
    """All solutions of member(z) = w, multiplicities collapsed.

    Raises NotSupportedError for non-polynomial members; a constant member
    yields no solutions.
    """
    coeffs, reason = polynomial_form(m)
    if coeffs is None:
        raise NotSupportedError(f"member {m.label} is not polynomial ({reason})")
    c = list(coeffs)
    c[0] = c[0] - w
    roots = aberth_roots(np.asarray(c))
    if roots.size == 0:
        return []
    residual = np.abs(polyval(np.asarray(coeffs), roots) - w)
    good = roots[residual < RESIDUAL_FACTOR * (1.0 + abs(w))]
    scale = 1.0 + float(np.max(np.abs(good))) if good.size else 1.0
    ps = PointSet(tol=max(dedup_tol, _MULTIPLICITY_TOL * scale))
    ps.add_batch(good, m.label)
    return ps.points


def _polynomial_members(spec: FamilySpec, lim: OrbitLimits):
    if isinstance(spec, Semigroup):
        members = [Member.from_expr(g) for g in spec.generators]
    else:
        members = enumerate_members(spec, lim.n_pre)
    out = [m for m in members if polynomial_form(m)[0] is not None]
    return out


def backward_orbit(spec: FamilySpec, w: complex, lim: OrbitLimits) -> PointSet:
    """Breadth-first preimage accumulation from w.

    Level k+1 holds the preimages of level k under the polynomial members
    (the generators, for semigroups); stops at the depth or point cap.
    """
    members = _polynomial_members(spec, lim)
    if not members:
        raise NotSupportedError("no polynomial members to invert")
    orbit = PointSet(tol=lim.dedup_tol)
    orbit.add(w, "seed")
    frontier = [complex(w)]
    for _ in range(lim.depth):
        if not frontier or len(orbit) >= lim.max_points:
            break
        level = []
        for z in frontier:
            for m in members:
                level.extend((m.label, q) for q in preimages(m, z, lim.dedup_tol))
        added = []
        for tag, q in sorted(level, key=lambda t: (t[1].real, t[1].imag)):
            if len(orbit) >= lim.max_points:
                break
            if orbit.add(q, tag):
                added.append(q)
        frontier = added
    return orbit


def exceptional_candidates(spec: FamilySpec, seeds, lim: OrbitLimits,
                           bound: int = 4) -> PointSet:
    """Seeds whose one-step preimage set stabilizes small (heuristic).

    A seed is a candidate when no new deduplicated preimage appears while
    scanning the last half of the consulted members and the total stays
    within `bound`.  Always flagged HEURISTIC: finiteness of the full
    backward orbit is not decidable from a truncation.
    """
    members = _polynomial_members(spec, lim)
    if not members and list(seeds):
        raise NotSupportedError("no polynomial members to invert")
    out = PointSet(tol=lim.dedup_tol)
    out.flags.add("HEURISTIC")
    for seed in seeds:
        acc = PointSet(tol=lim.dedup_tol)
        last_new = -1
        for k, m in enumerate(members):
            for q in sorted(preimages(m, seed, lim.dedup_tol),
                            key=lambda v: (v.real, v.imag)):
                if acc.add(q, m.label):
                    last_new = k
        stable = last_new < len(members) / 2 and len(acc) <= bound
        if stable:
            out.add(seed, "seed")
    return out


# ---------------------------------------------------------------------------
# invariance audits
# ---------------------------------------------------------------------------

@dataclass
class InvarianceReport:
    checked: int = 0
    violations: int = 0
    out_of_window: int = 0
    skipped_members: int = 0
    flags: set[str] = field(default_factory=set)

    @property
    def fraction(self) -> float:
        return self.violations / self.checked if self.checked else 0.0

    def to_dict(self):
        return {"checked": self.checked, "violations": self.violations,
                "out_of_window": self.out_of_window,
                "skipped_members": self.skipped_members,
                "fraction": self.fraction, "flags": sorted(self.flags)}


def _sample_true_pixels(member_set: np.ndarray, limit: int):
    rows, cols = np.nonzero(member_set)
    if rows.size == 0:
        return []
    idx = np.linspace(0, rows.size - 1, min(limit, rows.size)).astype(int)
    return list(zip(rows[idx], cols[idx]))


def _in_set_near(member_set: np.ndarray, w: Window, z: complex,
                 tol_px: int = 2) -> bool:
    row, col = w.pixel_of(z)
    r0, r1 = max(row - tol_px, 0), min(row + tol_px + 1, member_set.shape[0])
    c0, c1 = max(col - tol_px, 0), min(col + tol_px + 1, member_set.shape[1])
    return bool(member_set[r0:r1, c0:c1].any())


def check_backward_invariance(spec: FamilySpec, member_set: np.ndarray,
                              w: Window, lim: OrbitLimits,
                              samples: int = 500) -> InvarianceReport:
    """Preimages of in-set points must land in-set (2-pixel tolerance)."""
    members = _polynomial_members(spec, lim)
    report = InvarianceReport()
    if not members:
        raise NotSupportedError("no polynomial members to invert")
    for row, col in _sample_true_pixels(member_set, samples):
        z = w.center_of(row, col)
        for m in members:
            for q in preimages(m, z, lim.dedup_tol):
                if not w.contains(q):
                    report.out_of_window += 1
                    continue
                report.checked += 1
                if not _in_set_near(member_set, w, q):
                    report.violations += 1
    return report


def check_forward_invariance(spec: FamilySpec, member_set: np.ndarray,
                             w: Window, samples: int = 500,
                             n_members: int = 64) -> InvarianceReport:
    """Images of in-set points must stay in-set; out-of-window images are
    excluded and counted separately."""
    from . import expr as ex

    members = enumerate_members(spec, n_members)
    report = InvarianceReport()
    for row, col in _sample_true_pixels(member_set, samples):
        z = w.center_of(row, col)
        for m in members:
            val, flag = ex.evaluate_ex(m.expr, z)
            if flag != ex.OK:
                report.skipped_members += 1
                continue
            if not w.contains(val):
                report.out_of_window += 1
                continue
            report.checked += 1
            if not _in_set_near(member_set, w, val):
                report.violations += 1
    return report


def check_generator_escape(generators, z: complex, p: EscapeParams,
                           max_word_len: int = 5):
    """Index (0-based) of a generator whose image of z stays in the computed
    generalized escaping set of the semigroup truncation; None if none does.

    Precondition: z itself lies in the computed set.
    """
    from . import expr as ex

    spec = Semigroup(tuple(generators), max_word_len)
    _, in_u, _ = point_membership(spec, z, p)
    if not in_u:
        raise PreconditionError(
            "z is not in the computed generalized escaping set of the truncation")
    for i, g in enumerate(spec.generators):
        val, flag = ex.evaluate_ex(g, z)
        if flag != ex.OK:
            continue
        _, u_img, _ = point_membership(spec, val, p)
        if u_img:
            return i
    return None
