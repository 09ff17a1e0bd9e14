"""Built-in oracle suite: the closed-form reference families with known
Fatou/Julia, escaping-set, invariance, fixed-point and limit behavior.

Every case runs at fixed seeds and grids; escape radius, Marty threshold
and friends resolve through FATOUKIT_* environment overrides, so a tampered
configuration makes cases fail (exit 1) rather than silently drift.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .config import make_escape_params, make_normality_params, make_orbit_limits
from .dynamics import (CLASS_ATTRACTING, CLASS_INDIFFERENT, CLASS_REPELLING,
                       CLASS_SUPER_ATTRACTING, find_fixed_points,
                       limit_functions)
from .engine import orfilter
from .escape import check_algebra_laws
from .family import Parametric, UnionSpec, enumerate_members
from .normality import classify_normality
from .orbit import (OrbitLimits, PreconditionError, backward_orbit,
                    check_backward_invariance, check_forward_invariance,
                    check_generator_escape, exceptional_candidates)
from .parser import parse_expr, parse_family
from .pipeline import classify
from .topology import connectedness_report, label_components
from .window import DiskMask, Window


@dataclass
class Case:
    name: str
    description: str
    fn: object


def _params(n_max=256, window_len=32, **kw):
    np_ = make_normality_params(n_max=n_max, window_len=window_len,
                                **{k: v for k, v in kw.items()
                                   if k in ("marty_threshold",
                                            "growth_windows")})
    ep = make_escape_params(n_max=n_max, tail_window=window_len,
                            **{k: v for k, v in kw.items()
                               if k in ("escape_radius", "u_hits")})
    return np_, ep


def _fail(msg):
    return False, msg


def _ok(msg=""):
    return True, msg


def _cluster_count(mask):
    return label_components(mask, 8).count


# ---------------------------------------------------------------------------


def case_linear_pencil_point_julia():
    w = Window(-2, 2, -2, 2, 256, 256)
    np_, ep = _params()
    cls = classify(parse_family("family n: n*z"), w, np_, ep)
    jm = cls.julia_mask()
    if _cluster_count(jm) != 1:
        return _fail(f"expected one julia cluster, got {_cluster_count(jm)}")
    if not jm[w.pixel_of(0j)]:
        return _fail("julia cluster does not contain the pixel of 0")
    rest = ~jm
    frac = cls.fatou_mask()[rest].mean()
    if frac < 0.995:
        return _fail(f"fatou fraction {frac:.4f} < 0.995")
    return _ok(f"cluster={int(jm.sum())}px fatou={frac:.4f}")


def case_expansivity_coverage():
    # (a) images of a small circle around the non-normal point reach out to
    # the truncation scale; (b) member images of the punctured disk cover
    # every test point except the single omitted one.
    spec = parse_family("family n: n*z")
    members = enumerate_members(spec, 256)
    eps = 0.1
    circle = eps * np.exp(2j * np.pi * np.arange(64) / 64)
    reach = 0.0
    for m in members:
        vals = [abs(ex.evaluate_ex(m.expr, z)[0]) for z in circle]
        reach = max(reach, max(vals))
    if reach < 0.9 * 256 * eps:
        return _fail(f"image reach {reach:.1f} < {0.9 * 256 * eps:.1f}")

    lim = make_orbit_limits()
    from .orbit import preimages
    uncovered = []
    for re in np.linspace(-2, 2, 17):
        for im in np.linspace(-2, 2, 17):
            target = complex(re, im)
            hit = False
            for m in members[:lim.n_pre]:
                for q in preimages(m, target):
                    if 0 < abs(q) < eps:
                        hit = True
                        break
                if hit:
                    break
            if not hit:
                uncovered.append(target)
    bad = [q for q in uncovered if abs(q) > 1e-9]
    if bad:
        return _fail(f"{len(bad)} uncovered points away from the omitted one")
    return _ok(f"reach={reach:.1f}, uncovered={len(uncovered)} (omitted point)")


def case_exp_halfplane():
    w = Window(-2, 2, -2, 2, 256, 256)
    np_, ep = _params()
    cls = classify(parse_family("family n: exp(n*z)"), w, np_, ep)
    centers = w.centers()
    want = centers.real > 0
    outside = np.abs(centers.real) > 2 * w.pixel_scale
    agree = (cls.in_i == want)[outside].mean()
    if agree < 0.99:
        return _fail(f"half-plane agreement {agree:.4f} < 0.99")
    return _ok(f"agreement={agree:.4f}")


def case_exp_power_union():
    w = Window(-2, 2, -2, 2, 256, 256)
    np_, ep = _params()
    cls = classify(parse_family("family n: exp(n*z) | family n: z^n"),
                   w, np_, ep)
    centers = w.centers()
    want = (centers.real > 0) & (np.abs(centers) > 1)
    h = w.pixel_scale
    outside = (np.abs(centers.real) > 2 * h) & \
        (np.abs(np.abs(centers) - 1) > 2 * h)
    agree = (cls.in_i == want)[outside].mean()
    if agree < 0.99:
        return _fail(f"agreement {agree:.4f} < 0.99")
    return _ok(f"agreement={agree:.4f}")


def case_two_point_union():
    w = Window(-2, 2, -2, 2, 256, 256)
    np_, ep = _params()
    cls = classify(parse_family("family n: n*z | family n: n*(z-1)"),
                   w, np_, ep)
    jm = cls.julia_mask()
    if _cluster_count(jm) != 2:
        return _fail(f"expected two julia clusters, got {_cluster_count(jm)}")
    if not (jm[w.pixel_of(0j)] and jm[w.pixel_of(1 + 0j)]):
        return _fail("clusters miss the pixels of 0 and 1")
    if not cls.in_u.all():
        return _fail(f"generalized escaping set misses "
                     f"{int((~cls.in_u).sum())} pixels")
    # escaping set differs from the full window only near 0 and 1
    centers = w.centers()
    near = (np.abs(centers) <= 2.5 * w.pixel_scale) | \
        (np.abs(centers - 1) <= 2.5 * w.pixel_scale)
    if (~cls.in_i & ~near).any():
        return _fail("escaping set has holes away from 0 and 1")
    conn = connectedness_report(cls)
    if conn.julia_connected:
        return _fail("julia mask should be disconnected")
    if conn.fatou_component_count != 1:
        return _fail(f"expected one fatou component, got "
                     f"{conn.fatou_component_count}")
    if conn.boundary_connected and all(conn.boundary_connected):
        return _fail("the component boundary should be disconnected")
    if not conn.consistent:
        return _fail("connectedness characterization violated")
    return _ok("julia disconnected <-> boundary disconnected")


def case_disk_nonuniform_escape():
    # n_max = 224 keeps grid-aligned member zeros (n = 255/k on this grid)
    # out of the certificate windows; the tail-zero detector still sees the
    # zeros drifting into the center pixel
    w = Window(1.5, 2.5, -0.5, 0.5, 255, 255, disk=DiskMask(2 + 0j, 0.5))
    np_, ep = _params(n_max=224)
    cls = classify(parse_family("family n: ((2-1/n)-z)^2 * z^n"), w, np_, ep)
    domain = cls.domain_mask()
    missing = domain & ~cls.in_i
    if missing.any():
        return _fail(f"{int(missing.sum())} interior pixels not escaping")
    label = cls.labels[w.pixel_of(2 + 0j)]
    from .normality import LABEL_FATOU
    if label == LABEL_FATOU:
        return _fail("pixel at the disk center classified FATOU")
    # escaping set open in the raster: no isolated interior non-members
    holes = domain & ~cls.in_i & ~orfilter(~cls.in_i & domain, 1)
    if holes.any():
        return _fail("isolated non-member pixels inside the escaping set")
    return _ok("all interior escaping; center pixel flagged")


def case_affine_escape_disk():
    w = Window(-1, 1, -1, 1, 128, 128, disk=DiskMask(0j, 1.0))
    np_, ep = _params(n_max=128)
    cls = classify(parse_family("family n: n*(z-2)"), w, np_, ep)
    domain = cls.domain_mask()
    if (cls.folded_julia_mask() & domain).any():
        return _fail("expected an empty julia mask")
    if not cls.in_i[domain].all():
        return _fail("expected the whole disk to escape")
    return _ok("julia empty, escaping set fills the disk")


def case_locally_bounded():
    w = Window(-2, 2, -2, 2, 128, 128)
    np_, ep = _params(n_max=128)
    cls = classify(parse_family("family n: z/(1+1/n)"), w, np_, ep)
    if not cls.fatou_mask().all():
        return _fail("locally bounded family must be FATOU everywhere")
    if cls.in_i.any() or cls.in_u.any():
        return _fail("locally bounded family must have empty escaping sets")
    return _ok("all FATOU, empty escaping sets")


def case_shifted_centers_grid():
    ticks = np.linspace(-0.9, 0.9, 16)
    parts = []
    avals = []
    for are in ticks:
        for aim in ticks:
            a = complex(are, aim)
            if abs(a) >= 1:
                continue
            avals.append(a)
            parts.append(Parametric(ex.mul(ex.N(), ex.sub(ex.Z(), ex.const(a)))))
    spec = UnionSpec(tuple(parts))
    w = Window(-1, 1, -1, 1, 64, 64, disk=DiskMask(0j, 1.0))
    np_, ep = _params(n_max=64, window_len=16)
    cls = classify(spec, w, np_, ep)
    stuck = [a for a in avals if cls.in_i[w.pixel_of(a)]]
    if stuck:
        return _fail(f"{len(stuck)} shifted centers still classified escaping")
    domain = cls.domain_mask()
    frac = cls.in_i[domain].mean()
    if frac >= 1.0:
        return _fail("escaping set unexpectedly fills the whole disk")
    return _ok(f"all {len(avals)} centers excluded; I covers {frac:.3f} "
               "of the disk (finite-union lower bound)")


def case_algebra_exp_power():
    w = Window(-2, 2, -2, 2, 128, 128)
    np_, ep = _params(n_max=128)
    a = parse_family("family n: exp(n*z) | family n: z^n")
    b = parse_family("family n: exp(n*z) | family n: (z-1.5)^n")
    report = check_algebra_laws(a, b, w, ep, nparams=np_)
    mono = report.by_name("monotonicity")
    union = report.by_name("union")
    inter = report.by_name("intersection-I")
    if mono.status != "holds":
        return _fail(f"monotonicity violated ({mono.violations})")
    if union.status != "holds":
        return _fail(f"union laws violated ({union.violations})")
    if inter.status != "strict_inclusion":
        return _fail(f"intersection-I expected strict inclusion, "
                     f"got {inter.status} (viol={inter.violations})")
    return _ok(f"strict inclusion with {inter.strict_extra} extra pixels")


def case_algebra_linear_pair():
    w = Window(-1, 1, -1, 1, 128, 128)
    np_, ep = _params(n_max=128)
    a = parse_family("family n: n*z")
    b = parse_family("family n: n*(z-1/2)")
    report = check_algebra_laws(a, b, w, ep, nparams=np_)
    law4 = report.by_name("intersection-U")
    if law4.status != "strict_inclusion":
        return _fail(f"intersection-U expected strict inclusion, "
                     f"got {law4.status} (viol={law4.violations})")
    return _ok(f"strict inclusion with {law4.strict_extra} extra pixels")


def case_invariance_commuting():
    w = Window(-2, 2, -2, 2, 128, 128)
    np_, ep = _params(n_max=128)
    spec = parse_family("family n: n*z")
    cls = classify(spec, w, np_, ep)
    rep = check_backward_invariance(spec, cls.in_i, w, make_orbit_limits(),
                                    samples=400)
    if rep.violations:
        return _fail(f"{rep.violations}/{rep.checked} backward violations")
    return _ok(f"0/{rep.checked} violations")


def case_invariance_exp_forward():
    w = Window(-2, 2, -2, 2, 128, 128)
    np_, ep = _params(n_max=128)
    spec = parse_family("family n: exp(n*z)")
    cls = classify(spec, w, np_, ep)
    rep = check_forward_invariance(spec, cls.in_i, w, samples=400,
                                   n_members=16)
    if rep.violations == 0:
        return _fail("expected forward-invariance violations, found none")
    return _ok(f"{rep.violations}/{rep.checked} violations (not forward "
               "invariant)")


def case_semigroup_generator_tracking():
    ep = make_escape_params(n_max=64, tail_window=8, u_hits=3)
    growing = [parse_expr("2*z", allow_n=False),
               parse_expr("z+1", allow_n=False)]
    idx = check_generator_escape(growing, 1 + 0j, ep, max_word_len=5)
    if idx is None:
        return _fail("no generator keeps the point escaping")
    mixing = [parse_expr("2*z", allow_n=False),
              parse_expr("z/2", allow_n=False)]
    try:
        check_generator_escape(mixing, 1 + 0j, ep, max_word_len=5)
        return _fail("halving semigroup should fail the precondition")
    except PreconditionError:
        pass
    return _ok(f"generator index {idx + 1}; precondition path exercised")


def _expect_fixed_point(records, location, cls_name, tol=1e-6):
    for r in records:
        if abs(r.location - location) < tol:
            if r.cls != cls_name:
                return f"fixed point {location}: {r.cls} != {cls_name}"
            if r.residual >= 1e-8:
                return f"fixed point {location}: residual {r.residual:.2e}"
            return None
    return f"fixed point {location} not found"


def case_fixed_point_suite():
    w = Window(-2, 2, -2, 2, 64, 64)
    checks = [
        ("family n: (1/2+1/(3*n))*z*exp(n*z)", [(0j, CLASS_ATTRACTING)], 8),
        ("family n: n*z^2", [(0j, CLASS_SUPER_ATTRACTING)], 8),
        ("family n from 2: n*z", [(0j, CLASS_REPELLING)], 8),
        ("family n from 2: z^n*(z-1/2)+z",
         [(0j, CLASS_INDIFFERENT), (0.5 + 0j, CLASS_REPELLING)], 12),
        ("family n: 1.4*z-40*z^3+(z^2-0.01)^n",
         [(0.1 + 0j, CLASS_ATTRACTING), (-0.1 + 0j, CLASS_ATTRACTING)], 12),
    ]
    for text, expected, n_check in checks:
        records = find_fixed_points(parse_family(text), w, n_check)
        for loc, cname in expected:
            msg = _expect_fixed_point(records, loc, cname)
            if msg:
                return _fail(f"{text}: {msg}")
    # multiplier values of the first suite family: 1/2 + 1/(3n)
    records = find_fixed_points(
        parse_family("family n: (1/2+1/(3*n))*z*exp(n*z)"), w, 8)
    lams = records[0].multipliers
    for k, lam in enumerate(lams, start=1):
        want = 0.5 + 1.0 / (3 * k)
        if abs(lam - want) > 1e-9 * abs(want):
            return _fail(f"multiplier {k}: {lam} != {want}")
    return _ok("five families classified as expected")


def case_limit_suite():
    delta = 0.005
    probes = [delta, -delta, 1j * delta, -1j * delta, 0.1 + 0.1j,
              -0.15 + 0.05j]
    est = limit_functions(parse_family("family n: z*exp(z)*(1-1/(2*n))"),
                          probes, make_escape_params(n_max=262144))
    if est.kind != "FINITE":
        return _fail(f"expected FINITE, got {est.kind}")
    for q, v in zip(est.probes, est.values):
        want = q * np.exp(q)
        if abs(v - want) > 1e-6:
            return _fail(f"limit value at {q}: error {abs(v - want):.2e}")
    deriv = (est.values[0] - est.values[1]) / (2 * delta)
    if abs(deriv - 1.0) > 1e-4:
        return _fail(f"limit derivative at 0: {deriv}")

    est2 = limit_functions(parse_family("family n: n*(z-2)"),
                           [0.1 + 0.1j, -0.2j], make_escape_params())
    if est2.kind != "INFINITY":
        return _fail(f"expected INFINITY, got {est2.kind}")

    est3 = limit_functions(
        parse_family("family n: 1.4*z-40*z^3+(z^2-0.01)^n"),
        [0.05, 0.2, 0.1j, 0.15 + 0.1j], make_escape_params())
    if est3.kind != "FINITE":
        return _fail(f"expected FINITE for the perturbed cubic, got {est3.kind}")
    for q, v in zip(est3.probes, est3.values):
        want = 1.4 * q - 40 * q ** 3
        if abs(v - want) > 1e-6:
            return _fail(f"cubic limit at {q}: error {abs(v - want):.2e}")
    return _ok("finite limit matches, derivative not attracting at 0")


def case_orbit_closure():
    spec = parse_family("family n from 2: n*z")
    w = Window(-2, 2, -2, 2, 256, 256)
    np_, ep = _params()
    dists = []
    for depth in (1, 2, 3):
        orb = backward_orbit(spec, 1 + 0j, OrbitLimits(depth=depth))
        dists.append(orb.min_distance_to(0j))
    if not (dists[0] > dists[1] > dists[2]):
        return _fail(f"orbit distances not decreasing: {dists}")
    if dists[2] >= 2 * w.pixel_scale:
        return _fail(f"orbit does not approach the accumulation point: "
                     f"{dists[2]:.4f}")
    cls = classify(spec, w, np_, ep)
    jm = cls.julia_mask()
    orb = backward_orbit(spec, 1 + 0j, OrbitLimits(depth=3))
    near = np.zeros_like(jm)
    for q in orb.points:
        row, col = w.pixel_of(q)
        near[max(row - 2, 0):row + 3, max(col - 2, 0):col + 3] = True
    if (jm & ~near).any():
        return _fail("julia pixels outside the orbit dilation")
    exc = exceptional_candidates(parse_family("family n: n*z"),
                                 [0j, 1 + 0j], make_orbit_limits())
    if [p for p in exc.points] != [0j]:
        return _fail(f"exceptional candidates {exc.points} != [0]")
    if "HEURISTIC" not in exc.flags:
        return _fail("exceptional candidates must carry the HEURISTIC flag")
    return _ok(f"orbit min distances {['%.2e' % d for d in dists]}")


def case_escape_floor():
    w = Window(-2, 2, -2, 2, 256, 256)
    np_, ep = _params()
    cls = classify(parse_family("family n: n*z"), w, np_, ep)
    centers = w.centers()
    near0 = np.abs(centers) <= 2.5 * w.pixel_scale
    if (~cls.in_i & ~near0).any():
        return _fail("escaping set has holes beyond 2 pixels from 0")
    if (~cls.in_u & ~near0).any():
        return _fail("generalized escaping set has holes beyond 2 pixels")
    return _ok("escape certificates reach the full window")


def case_ring_two_fixed_points():
    spec = parse_family("family n from 2: z^n*(z-1/2)+z")
    w = Window(-1.5, 1.5, -1.5, 1.5, 192, 192)
    np_, ep = _params()
    cls = classify(spec, w, np_, ep)
    fold = cls.folded_julia_mask()
    if not fold.any():
        return _fail("no julia-like pixels found")
    centers = w.centers()
    h = w.pixel_scale
    off = np.abs(np.abs(centers) - 1.0)
    if (fold & (off > 3.5 * h)).any():
        worst = float(off[fold].max() / h)
        return _fail(f"julia pixels {worst:.1f}px away from the unit circle")
    for theta in np.linspace(0, 2 * np.pi, 64, endpoint=False):
        target = np.exp(1j * theta)
        row, col = w.pixel_of(target)
        sl = fold[max(row - 2, 0):row + 3, max(col - 2, 0):col + 3]
        if not sl.any():
            return _fail(f"circle not covered near angle {theta:.2f}")
    conn = connectedness_report(cls)
    if not conn.julia_connected:
        return _fail("ring mask is disconnected")
    if conn.fatou_component_count != 2:
        return _fail(f"expected 2 fatou components, got "
                     f"{conn.fatou_component_count}")
    if not conn.consistent:
        return _fail("connectedness characterization violated")
    comps = label_components(cls.domain_mask() & ~fold, 4)
    c0 = comps.labels[w.pixel_of(0j)]
    c12 = comps.labels[w.pixel_of(0.5 + 0j)]
    if c0 == 0 or c0 != c12:
        return _fail("0 and 1/2 do not share a fatou component")
    records = find_fixed_points(spec, w, 12)
    msg = _expect_fixed_point(records, 0j, CLASS_INDIFFERENT) or \
        _expect_fixed_point(records, 0.5 + 0j, CLASS_REPELLING)
    if msg:
        return _fail(msg)
    return _ok("ring connected; both fixed points share a component")


def case_perfect_or_empty():
    w = Window(-2, 2, -2, 2, 128, 128)
    np_, ep = _params(n_max=128)
    cls = classify(parse_family("family n: z/(1+1/n)"), w, np_, ep)
    interior_u = cls.in_u & ~orfilter(~cls.in_u, 1)
    if interior_u.any():
        return _ok("generalized escaping set has interior; nothing to check")
    fold = cls.folded_julia_mask()
    if not fold.any():
        return _ok("julia mask empty")
    # an isolated pixel has no other fold pixel in its 8-neighborhood
    has_nb = np.zeros_like(fold)
    padded = np.pad(fold, 1)
    for dy in (0, 1, 2):
        for dx in (0, 1, 2):
            if dy == 1 and dx == 1:
                continue
            has_nb |= padded[dy:dy + fold.shape[0], dx:dx + fold.shape[1]]
    if (fold & ~has_nb).any():
        return _fail("julia mask has isolated pixels while the generalized "
                     "escaping set has empty interior")
    return _ok("no isolated julia pixels")


def case_escape_boundary_in_julia():
    specs = ["family n: exp(n*z)", "family n: n*z | family n: n*(z-1)"]
    w = Window(-2, 2, -2, 2, 128, 128)
    np_, ep = _params(n_max=128)
    for text in specs:
        cls = classify(parse_family(text), w, np_, ep)
        edge = cls.in_i & orfilter(~cls.in_i, 1)
        flagged = orfilter(cls.folded_julia_mask(), 1)
        bad = edge & ~flagged
        if bad.any():
            return _fail(f"{text}: {int(bad.sum())} escaping-boundary pixels "
                         "not julia/undecided within 1px")
    return _ok("boundary of the escaping set sits in the julia mask")


CASES = [
    Case("linear-pencil-point-julia",
         "n*z: one julia cluster at 0, fatou elsewhere",
         case_linear_pencil_point_julia),
    Case("expansivity-coverage",
         "n*z: images of a punctured neighborhood cover all but one point",
         case_expansivity_coverage),
    Case("exp-halfplane",
         "exp(n*z): escaping set is the right half plane",
         case_exp_halfplane),
    Case("exp-power-union",
         "exp(n*z) | z^n: escaping set is {Re z>0, |z|>1}",
         case_exp_power_union),
    Case("two-point-union",
         "n*z | n*(z-1): julia {0,1}, U everywhere, connectedness report",
         case_two_point_union),
    Case("disk-nonuniform-escape",
         "((2-1/n)-z)^2*z^n on |z-2|<1/2: escape everywhere, center flagged",
         case_disk_nonuniform_escape),
    Case("affine-escape-disk",
         "n*(z-2) on the unit disk: empty julia, full escaping set",
         case_affine_escape_disk),
    Case("locally-bounded",
         "z/(1+1/n): all FATOU, empty escaping sets",
         case_locally_bounded),
    Case("shifted-centers-grid",
         "union of n*(z-a) over an a-grid: every center excluded from I",
         case_shifted_centers_grid),
    Case("algebra-exp-power",
         "union/monotonicity laws hold; intersection-I strictly includes",
         case_algebra_exp_power),
    Case("algebra-linear-pair",
         "n*z vs n*(z-1/2): intersection-U strictly included",
         case_algebra_linear_pair),
    Case("invariance-commuting",
         "n*z: escaping set backward invariant (0 violations)",
         case_invariance_commuting),
    Case("invariance-exp-forward",
         "exp(n*z): escaping set not forward invariant (violations > 0)",
         case_invariance_exp_forward),
    Case("semigroup-generator-tracking",
         "some generator image stays in the generalized escaping set",
         case_semigroup_generator_tracking),
    Case("fixed-point-suite",
         "five reference families: multiplier classes and residuals",
         case_fixed_point_suite),
    Case("limit-suite",
         "finite/infinite limit functions with value and derivative checks",
         case_limit_suite),
    Case("orbit-closure",
         "backward orbit accumulates at the julia point; candidates at 0",
         case_orbit_closure),
    Case("escape-floor",
         "n*z: escape certificates cover the window up to 2px at 0",
         case_escape_floor),
    Case("ring-two-fixed-points",
         "z^n*(z-1/2)+z: circle ring; indifferent + repelling in one component",
         case_ring_two_fixed_points),
    Case("perfect-or-empty",
         "empty-interior U forces an empty or isolated-point-free julia mask",
         case_perfect_or_empty),
    Case("escape-boundary-in-julia",
         "boundary of the escaping set lands on julia/undecided pixels",
         case_escape_boundary_in_julia),
]


def run_verify(names=None, list_only=False, out=print) -> int:
    cases = CASES
    if names:
        wanted = set(names)
        unknown = wanted - {c.name for c in CASES}
        if unknown:
            out(f"unknown case(s): {', '.join(sorted(unknown))}")
            return 1
        cases = [c for c in CASES if c.name in wanted]
    if list_only:
        for c in cases:
            out(f"{c.name}: {c.description}")
        return 0
    failures = 0
    for c in cases:
        try:
            ok, detail = c.fn()
        except Exception as exc:  # noqa: BLE001 - a crash is a failure
            ok, detail = False, f"crashed: {type(exc).__name__}: {exc}"
        status = "PASS" if ok else "FAIL"
        out(f"{status} {c.name}" + (f" - {detail}" if detail else ""))
        if not ok:
            failures += 1
    out(f"{len(cases) - failures}/{len(cases)} cases passed")
    return 0 if failures == 0 else 1
