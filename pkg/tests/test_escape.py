import numpy as np
import pytest

from fatoukit.escape import (EscapeParams, check_algebra_laws, classify_I,
                             classify_U, classify_escape, escape_profile,
                             point_membership)
from fatoukit.normality import NormalityParams
from fatoukit.parser import parse_family
from fatoukit.window import Window


def test_profile_linear_pencil():
    prof = escape_profile(parse_family("family n: n*z"), 1 + 0j,
                          EscapeParams())
    mags = prof.parts[0].magnitudes
    assert np.allclose(mags, np.arange(1, 257))


def test_profile_exp_decay():
    prof = escape_profile(parse_family("family n: exp(n*z)"), -1 + 0j,
                          EscapeParams(n_max=64))
    mags = prof.parts[0].magnitudes
    assert mags[0] < 0.4 and mags[-1] < 1e-20
    assert (np.diff(mags) < 0).all()


def test_profile_union_parts_kept_separate():
    prof = escape_profile(
        parse_family("family n: n*z | family n: n*(z-1)"), 1 + 0j,
        EscapeParams(n_max=64))
    assert len(prof.parts) == 2
    assert prof.parts[0].magnitudes[-1] == 64.0
    assert (prof.parts[1].magnitudes == 0).all()


def test_classify_I_exp_halfplane():
    w = Window(-2, 2, -2, 2, 128, 128)
    in_i, warnings = classify_I(parse_family("family n: exp(n*z)"), w,
                                EscapeParams(n_max=128))
    centers = w.centers()
    outside = np.abs(centers.real) > 2 * w.pixel_scale
    assert ((in_i == (centers.real > 0))[outside]).all()
    assert not warnings


def test_classify_U_union_everywhere():
    w = Window(-2, 2, -2, 2, 128, 128)
    in_u, _ = classify_U(parse_family("family n: n*z | family n: n*(z-1)"),
                         w, EscapeParams(n_max=128))
    assert in_u.all()


def test_classify_exp_not_in_U_on_left():
    ok_i, ok_u, _ = point_membership(parse_family("family n: exp(n*z)"),
                                     -1 + 0j, EscapeParams())
    assert not ok_i and not ok_u


def test_vacuous_finite_family():
    w = Window(-1, 1, -1, 1, 16, 16)
    spec = parse_family("set: z; z^2")
    in_i, warn_i = classify_I(spec, w, EscapeParams(n_max=16, tail_window=4))
    in_u, warn_u = classify_U(spec, w, EscapeParams(n_max=16, tail_window=4))
    assert in_i.all() and "VACUOUS" in warn_i
    assert not in_u.any() and warn_u


def test_in_I_implies_in_U():
    w = Window(-2, 2, -2, 2, 64, 64)
    for text in ("family n: n*z", "family n: exp(n*z)",
                 "family n: exp(n*z) | family n: z^n",
                 "family n: n*(z-2)"):
        in_i, in_u, _ = classify_escape(parse_family(text), w,
                                        EscapeParams(n_max=64,
                                                     tail_window=16))
        assert not (in_i & ~in_u).any(), text


def test_union_classification_is_pixelwise_and():
    w = Window(-2, 2, -2, 2, 64, 64)
    p = EscapeParams(n_max=64, tail_window=16)
    a = parse_family("family n: exp(n*z)")
    b = parse_family("family n: z^n")
    u = parse_family("family n: exp(n*z) | family n: z^n")
    ia, ua, _ = classify_escape(a, w, p)
    ib, ub, _ = classify_escape(b, w, p)
    iu, uu, _ = classify_escape(u, w, p)
    assert (iu == (ia & ib)).all()
    assert (uu == (ua | ub)).all()


def test_anti_monotone_under_index_shift():
    # {n z : n >= 64} is a subfamily of {n z : n >= 1}
    w = Window(-2, 2, -2, 2, 64, 64)
    p = EscapeParams(n_max=64, tail_window=16)
    small = parse_family("family n from 64: n*z")
    big = parse_family("family n: n*z")
    i_small, u_small, _ = classify_escape(small, w, p)
    i_big, u_big, _ = classify_escape(big, w, p)
    assert not (i_big & ~i_small).any()   # I(bigger family) subset of I(sub)
    assert not (u_small & ~u_big).any()   # U(sub) subset of U(bigger)


def test_algebra_identical_families_all_equalities():
    w = Window(-2, 2, -2, 2, 64, 64)
    p = EscapeParams(n_max=64, tail_window=16)
    np_ = NormalityParams(n_max=64, window_len=16)
    spec = parse_family("family n: exp(n*z)")
    report = check_algebra_laws(spec, spec, w, p, nparams=np_)
    assert report.by_name("monotonicity").status == "holds"
    assert report.by_name("union").status == "holds"
    assert report.by_name("intersection-I").status == "equality"
    assert report.by_name("intersection-U").status == "equality"


def test_algebra_empty_intersection_strict():
    w = Window(-1, 1, -1, 1, 64, 64)
    p = EscapeParams(n_max=64, tail_window=16)
    np_ = NormalityParams(n_max=64, window_len=16)
    report = check_algebra_laws(parse_family("family n: n*z"),
                                parse_family("family n: n*(z-1/2)"),
                                w, p, nparams=np_)
    law3 = report.by_name("intersection-I")
    assert law3.status == "hypothesis_not_met"
    law4 = report.by_name("intersection-U")
    assert law4.status == "strict_inclusion"
    assert law4.violations == 0 and law4.strict_extra > 0


def test_params_validation():
    with pytest.raises(ValueError):
        EscapeParams(n_max=16, tail_window=32)
    with pytest.raises(ValueError):
        EscapeParams(u_hits=1)
