import cmath

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fatoukit import expr as ex
from fatoukit.parser import parse_expr


def test_eval_linear():
    e = parse_expr("n*z")
    assert ex.evaluate(ex.bind_n(e, 2), 3 + 0j) == 6 + 0j


def test_eval_euler_identity():
    e = ex.bind_n(parse_expr("exp(n*z)"), 1)
    val = ex.evaluate(e, complex(0, cmath.pi))
    assert abs(val - (-1)) < 1e-12


def test_eval_disk_family_member():
    # n=5 member of ((2-1/n)-z)^2 * z^n at z=2, against direct arithmetic
    e = ex.bind_n(parse_expr("((2-1/n)-z)^2 * z^n"), 5)
    want = ((2 - 1 / 5 - 2) ** 2) * 2 ** 5
    assert abs(ex.evaluate(e, 2 + 0j) - want) < 1e-12 * (1 + abs(want))


def test_eval_pole_flagged():
    e = parse_expr("1/(z-1)", allow_n=False)
    val, flag = ex.evaluate_ex(e, 1 + 0j)
    assert flag == ex.POLE
    with pytest.raises(ex.PoleError):
        ex.evaluate(e, 1 + 0j)


def test_eval_overflow_escapes():
    e = ex.bind_n(parse_expr("exp(n*z)"), 1000)
    val, flag = ex.evaluate_ex(e, 2 + 0j)
    assert flag == ex.ESCAPED
    assert not cmath.isfinite(val)


def test_derivative_super_attracting():
    d = ex.differentiate(parse_expr("n*z^2"))
    for n in (1, 5, 77):
        assert ex.evaluate(d, 0j, n=n) == 0j


def test_derivative_linear():
    d = ex.differentiate(parse_expr("n*z"))
    assert ex.evaluate(d, 123 - 4j, n=9) == 9 + 0j


def test_derivative_attracting_multiplier():
    d = ex.differentiate(parse_expr("(1/2+1/(3*n))*z*exp(n*z)"))
    for n in (1, 2, 10):
        want = 0.5 + 1.0 / (3 * n)
        assert abs(ex.evaluate(d, 0j, n=n) - want) < 1e-15


@given(st.integers(1, 20), st.complex_numbers(max_magnitude=3.0,
                                              allow_nan=False,
                                              allow_infinity=False))
@settings(max_examples=200, deadline=None)
def test_derivative_matches_finite_difference(n, z):
    texts = ["n*z", "exp(n*z)", "z^n*(z-1/2)+z", "(1/2+1/(3*n))*z*exp(n*z)",
             "sin(z)*cos(z)+z^3"]
    h = 1e-6
    for text in texts:
        e = ex.bind_n(parse_expr(text), n)
        d = ex.differentiate(e)
        sym, flag = ex.evaluate_ex(d, z)
        if flag != ex.OK:
            continue
        vp, fp = ex.evaluate_ex(e, z + h)
        vm, fm = ex.evaluate_ex(e, z - h)
        if fp != ex.OK or fm != ex.OK:
            continue
        fd = (vp - vm) / (2 * h)
        assert abs(sym - fd) / (1 + abs(sym)) < 1e-4


def test_poly_coeffs_examples():
    m = ex.bind_n(parse_expr("n*z"), 3)
    assert ex.poly_coeffs(m) == [0j, 3 + 0j]
    m2 = ex.bind_n(parse_expr("((2-1/n)-z)^2 * z^n"), 2)
    assert ex.poly_coeffs(m2) == [0j, 0j, 2.25 + 0j, -3 + 0j, 1 + 0j]


def test_poly_coeffs_rejects_transcendental():
    with pytest.raises(ex.NotPolynomial) as err:
        ex.poly_coeffs(ex.bind_n(parse_expr("exp(n*z)"), 1))
    assert err.value.reason == "NOT_POLYNOMIAL"


def test_poly_coeffs_degree_cap():
    with pytest.raises(ex.NotPolynomial) as err:
        ex.poly_coeffs(ex.bind_n(parse_expr("z^n"), 65))
    assert err.value.reason == "DEGREE_EXCEEDED"
    assert len(ex.poly_coeffs(ex.bind_n(parse_expr("z^n"), 64))) == 65


def test_poly_coeffs_horner_agrees_with_eval():
    import numpy as np
    rng = np.random.RandomState(7)
    for text, n in [("((2-1/n)-z)^2 * z^n", 4), ("z^n*(z-1/2)+z", 6),
                    ("n*z^2", 3)]:
        e = ex.bind_n(parse_expr(text), n)
        coeffs = ex.poly_coeffs(e)
        for _ in range(100):
            z = complex(*rng.uniform(-2, 2, 2) / np.sqrt(2))
            horner = 0j
            for c in reversed(coeffs):
                horner = horner * z + c
            direct = ex.evaluate(e, z)
            assert abs(horner - direct) <= 1e-12 * (1 + abs(direct))


def test_bind_n_folds_constants():
    e = ex.bind_n(parse_expr("(2-1/n)-z"), 5)
    assert isinstance(e, ex.Sub)
    assert e.a == ex.Const(1.8 + 0j)


def test_printer_round_trip_nested():
    cases = ["n*z", "-(z+1)^2", "z^-2", "exp(n*z)/(1+z)", "(1+2i)*z",
             "z^(n+1)", "2i*sin(z)-cos(z/3)"]
    for text in cases:
        e = parse_expr(text)
        assert parse_expr(ex.to_text(e)) == e
