import numpy as np
import pytest

from fatoukit.dynamics import (CLASS_ATTRACTING, CLASS_INDIFFERENT,
                               CLASS_MIXED, CLASS_REPELLING,
                               CLASS_SUPER_ATTRACTING,
                               FixedPointPreconditionError, find_fixed_points,
                               limit_functions, multiplier_spectrum,
                               check_constant_limit_fixed)
from fatoukit.escape import EscapeParams
from fatoukit.parser import parse_family
from fatoukit.window import Window

W = Window(-2, 2, -2, 2, 64, 64)


def test_attracting_not_super():
    recs = find_fixed_points(
        parse_family("family n: (1/2+1/(3*n))*z*exp(n*z)"), W, 8)
    assert len(recs) == 1
    r = recs[0]
    assert abs(r.location) < 1e-9
    assert r.cls == CLASS_ATTRACTING
    assert r.residual < 1e-8
    for k, lam in enumerate(r.multipliers, start=1):
        assert abs(lam - (0.5 + 1 / (3 * k))) < 1e-12


def test_super_attracting():
    recs = find_fixed_points(parse_family("family n: n*z^2"), W, 8)
    assert len(recs) == 1
    assert recs[0].cls == CLASS_SUPER_ATTRACTING
    assert all(abs(l) < 1e-9 for l in recs[0].multipliers)


def test_repelling_shifted_index():
    recs = find_fixed_points(parse_family("family n from 2: n*z"), W, 8)
    assert len(recs) == 1
    assert recs[0].cls == CLASS_REPELLING
    assert [l.real for l in recs[0].multipliers] == list(range(2, 10))


def test_indifferent_and_repelling_pair():
    recs = find_fixed_points(parse_family("family n from 2: z^n*(z-1/2)+z"),
                             W, 12)
    by_loc = {round(r.location.real, 3): r for r in recs}
    assert by_loc[0.0].cls == CLASS_INDIFFERENT
    assert all(abs(l - 1) < 1e-9 for l in by_loc[0.0].multipliers)
    assert by_loc[0.5].cls == CLASS_REPELLING
    for k, lam in enumerate(by_loc[0.5].multipliers, start=2):
        assert abs(lam - (1 + 2.0 ** -k)) < 1e-9


def test_two_attracting_points():
    recs = find_fixed_points(
        parse_family("family n: 1.4*z-40*z^3+(z^2-0.01)^n"), W, 12)
    locs = sorted(r.location.real for r in recs if abs(r.location) < 0.3)
    assert len(locs) == 2
    assert abs(locs[0] + 0.1) < 1e-9 and abs(locs[1] - 0.1) < 1e-9
    for r in recs:
        if abs(r.location) < 0.3:
            assert r.cls == CLASS_ATTRACTING


def test_multiplier_spectrum_repelling_in_fatou():
    # scaled z*exp(z): repelling at 0 although the point may be normal
    rec = multiplier_spectrum(
        parse_family("family n: 1.2*(1+1/n)*z*exp(z)"), 0j, 8)
    assert rec.cls == CLASS_REPELLING
    for k, lam in enumerate(rec.multipliers, start=1):
        assert abs(lam - 1.2 * (1 + 1 / k)) < 1e-12


def test_multiplier_spectrum_attracting_limit_not():
    rec = multiplier_spectrum(
        parse_family("family n: z*exp(z)*(1-1/(2*n))"), 0j, 8)
    assert rec.cls == CLASS_ATTRACTING
    assert all(abs(l - (1 - 1 / (2 * k))) < 1e-12
               for k, l in enumerate(rec.multipliers, start=1))


def test_multiplier_spectrum_mixed():
    rec = multiplier_spectrum(parse_family("family n: z^n*(z-1/2)+z"),
                              0j, 6)  # n=1 member has multiplier 1/2
    assert rec.cls == CLASS_MIXED


def test_multiplier_spectrum_precondition():
    with pytest.raises(FixedPointPreconditionError) as err:
        multiplier_spectrum(parse_family("family n: n*z"), 1 + 0j, 4)
    assert err.value.residual > 1


def test_limit_finite_value_and_derivative():
    d = 0.005
    est = limit_functions(parse_family("family n: z*exp(z)*(1-1/(2*n))"),
                          [d, -d, 0.1 + 0.1j], EscapeParams(n_max=262144))
    assert est.kind == "FINITE"
    for q, v in zip(est.probes, est.values):
        assert abs(v - q * np.exp(q)) < 1e-6
    deriv = (est.values[0] - est.values[1]) / (2 * d)
    assert abs(deriv - 1) < 1e-4


def test_limit_infinity():
    est = limit_functions(parse_family("family n: n*(z-2)"),
                          [0.2j, 0.5, -0.3 - 0.3j], EscapeParams())
    assert est.kind == "INFINITY"


def test_limit_none_for_oscillating():
    est = limit_functions(parse_family("family n: z^n"),
                          [1.2 + 0j, 1.3j], EscapeParams(n_max=64))
    # |z|>1 grows but 1.3j spirals in argument; 1.2 real grows: INFINITY
    assert est.kind == "INFINITY"
    est2 = limit_functions(parse_family("family n: (-1)^n + z"),
                           [0.1 + 0.1j], EscapeParams(n_max=64))
    assert est2.kind == "NONE"


def test_limit_requires_probes():
    with pytest.raises(ValueError):
        limit_functions(parse_family("family n: n*z"), [], EscapeParams())


def test_constant_limit_fixed_checks():
    assert check_constant_limit_fixed(parse_family("family n: n*z"), 0j)[0] \
        == "PASS"
    verdict, offenders = check_constant_limit_fixed(
        parse_family("family n: n*z"), 1 + 0j)
    assert verdict == "FAIL" and offenders
    # the power family commutes (z^n o z^m = z^(nm)) and fixes 0 and 1
    assert check_constant_limit_fixed(parse_family("family n: z^n"),
                                      0j)[0] == "PASS"
    assert check_constant_limit_fixed(parse_family("family n: z^n"),
                                      1 + 0j)[0] == "PASS"
    # scaled z*exp(z) members do not commute: the hypothesis check signals
    verdict, _ = check_constant_limit_fixed(
        parse_family("family n: z*exp(z)*(1-1/(2*n))"), 0j)
    assert verdict == "HYPOTHESIS_NOT_MET"
    verdict, _ = check_constant_limit_fixed(
        parse_family("family n: exp(n*z) | family n: z^n"), 0j)
    assert verdict == "HYPOTHESIS_NOT_MET"
