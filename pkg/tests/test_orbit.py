import numpy as np
import pytest

from fatoukit import expr as ex
from fatoukit.escape import EscapeParams
from fatoukit.family import Member, enumerate_members
from fatoukit.orbit import (NotSupportedError, OrbitLimits, PreconditionError,
                            backward_orbit, check_backward_invariance,
                            check_forward_invariance, check_generator_escape,
                            exceptional_candidates, preimages)
from fatoukit.parser import parse_expr, parse_family
from fatoukit.window import Window


def test_preimages_linear():
    m = enumerate_members(parse_family("family n: n*z"), 3)[2]
    assert preimages(m, 6 + 0j) == [2 + 0j]


def test_preimages_square():
    m = Member.from_word((parse_expr("z^2", allow_n=False),), (0,))
    roots = sorted(preimages(m, 4 + 0j), key=lambda v: v.real)
    assert len(roots) == 2
    assert abs(roots[0] + 2) < 1e-9 and abs(roots[1] - 2) < 1e-9


def test_preimages_double_roots_collapse():
    m = enumerate_members(parse_family("family n: ((2-1/n)-z)^2 * z^n"), 2)[1]
    roots = sorted(preimages(m, 0j), key=lambda v: v.real)
    assert len(roots) == 2
    assert abs(roots[0]) < 1e-7 and abs(roots[1] - 1.5) < 1e-6


def test_preimages_residuals():
    rng = np.random.RandomState(3)
    members = enumerate_members(parse_family("family n: z^n*(z-1/2)+z"), 8)
    for m in members[2:6]:
        for _ in range(5):
            target = complex(*rng.uniform(-2, 2, 2))
            for q in preimages(m, target):
                val = ex.evaluate(m.expr, q)
                assert abs(val - target) < 1e-8 * (1 + abs(target))


def test_preimages_not_supported():
    m = enumerate_members(parse_family("family n: exp(n*z)"), 1)[0]
    with pytest.raises(NotSupportedError):
        preimages(m, 1 + 0j)


def test_preimages_constant_member_no_solution():
    m = Member.from_expr(ex.Const(5 + 0j))
    assert preimages(m, 1 + 0j) == []


def test_backward_orbit_linear_depth_one():
    orbit = backward_orbit(parse_family("family n: n*z"), 1 + 0j,
                           OrbitLimits(depth=1))
    vals = sorted(p.real for p in orbit.points)
    assert len(orbit) == 64
    assert vals[-1] == 1.0 and abs(vals[0] - 1 / 64) < 1e-12


def test_backward_orbit_fixed_zero():
    orbit = backward_orbit(parse_family("family n: n*z"), 0j,
                           OrbitLimits(depth=3))
    assert orbit.points == [0j]


def test_backward_orbit_semigroup_halving_chain():
    orbit = backward_orbit(parse_family("semigroup L=3: 2*z"), 8 + 0j,
                           OrbitLimits(depth=3))
    assert sorted(p.real for p in orbit.points) == [1.0, 2.0, 4.0, 8.0]


def test_backward_orbit_point_cap():
    orbit = backward_orbit(parse_family("family n: n*z"), 1 + 0j,
                           OrbitLimits(depth=3, max_points=100))
    assert len(orbit) <= 100


def test_exceptional_candidates_linear():
    out = exceptional_candidates(parse_family("family n: n*z"),
                                 [0j, 1 + 0j], OrbitLimits())
    assert out.points == [0j]
    assert "HEURISTIC" in out.flags


def test_exceptional_candidates_empty_seed_list():
    out = exceptional_candidates(parse_family("family n: n*z"), [],
                                 OrbitLimits())
    assert out.points == []


def test_backward_invariance_commuting_family():
    w = Window(-2, 2, -2, 2, 64, 64)
    spec = parse_family("family n: n*z")
    centers = w.centers()
    in_set = np.abs(centers) > 0.01  # escaping set: everything but 0
    rep = check_backward_invariance(spec, in_set, w, OrbitLimits(n_pre=16),
                                    samples=100)
    assert rep.violations == 0
    assert rep.checked > 0


def test_backward_invariance_empty_set_vacuous():
    w = Window(-2, 2, -2, 2, 32, 32)
    spec = parse_family("family n: n*z")
    rep = check_backward_invariance(spec, np.zeros((32, 32), bool), w,
                                    OrbitLimits(n_pre=8))
    assert rep.checked == 0 and rep.violations == 0


def test_forward_invariance_full_window():
    w = Window(-2, 2, -2, 2, 32, 32)
    spec = parse_family("family n: z/(1+1/n)")
    rep = check_forward_invariance(spec, np.ones((32, 32), bool), w,
                                   samples=50, n_members=8)
    assert rep.violations == 0


def test_forward_invariance_exp_counterexample():
    w = Window(-2, 2, -2, 2, 64, 64)
    spec = parse_family("family n: exp(n*z)")
    centers = w.centers()
    in_set = centers.real > 0
    rep = check_forward_invariance(spec, in_set, w, samples=200, n_members=8)
    assert rep.violations > 0


def test_generator_escape_single_generator():
    # five words only, so the windows must be small enough to certify
    ep = EscapeParams(n_max=64, tail_window=2, u_hits=2)
    idx = check_generator_escape([parse_expr("2*z", allow_n=False)], 1 + 0j,
                                 ep, max_word_len=5)
    assert idx == 0


def test_generator_escape_precondition():
    ep = EscapeParams(n_max=64, tail_window=8, u_hits=3)
    gens = [parse_expr("2*z", allow_n=False), parse_expr("z/2", allow_n=False)]
    with pytest.raises(PreconditionError):
        check_generator_escape(gens, 1 + 0j, ep, max_word_len=5)
