import numpy as np
import pytest

from fatoukit import backends as bk
from fatoukit import expr as ex
from fatoukit.engine import enumerate_parts, sweep
from fatoukit.parser import parse_expr, parse_family
from fatoukit.tape import compile_expr

TEXTS = ["n*z", "exp(n*z)", "z^n", "((2-1/n)-z)^2*z^n", "z^n*(z-1/2)+z",
         "1/(z-1)", "z^(1+2i)", "sin(z)*cos(n*z)", "z^-2"]


def _points():
    rng = np.random.RandomState(11)
    pts = rng.uniform(-2, 2, (400, 2))
    return pts[:, 0] + 1j * pts[:, 1]


@pytest.mark.parametrize("text", TEXTS)
def test_numpy_matches_scalar(text):
    e = ex.bind_n(parse_expr(text), 6)
    tape = compile_expr(e)
    pts = _points()
    vals, flags = bk.eval_points(tape, pts)
    for z, v, f in zip(pts[:50], vals[:50], flags[:50]):
        sv, sf = ex.evaluate_ex(e, z)
        assert f == sf
        if sf == ex.OK:
            assert abs(v - sv) <= 1e-12 * (1 + abs(sv))


def test_flags_distinguish_pole_and_escape():
    pole = compile_expr(parse_expr("1/z", allow_n=False))
    vals, flags = bk.eval_points(pole, np.array([0j, 1 + 0j]))
    assert flags[0] == bk.FLAG_POLE and flags[1] == bk.FLAG_OK
    blow = compile_expr(ex.bind_n(parse_expr("exp(n*z)"), 2000))
    vals, flags = bk.eval_points(blow, np.array([1 + 0j, -1 + 0j]))
    assert flags[0] == bk.FLAG_ESCAPED and flags[1] == bk.FLAG_OK


def test_backends_agree(numba_available):
    if not numba_available:
        pytest.skip("numba unavailable")
    pts = _points()
    for text in TEXTS:
        e = ex.bind_n(parse_expr(text), 6)
        tape = compile_expr(e)
        bk.set_backend("numpy")
        v1, f1 = bk.eval_points(tape, pts)
        bk.set_backend("numba")
        v2, f2 = bk.eval_points(tape, pts)
        bk.set_backend("numpy")
        assert (f1 == f2).all()
        ok = f1 == bk.FLAG_OK
        err = np.abs(v1[ok] - v2[ok]) / (1 + np.abs(v1[ok]))
        assert err.max() < 1e-12


def test_sweep_backends_agree(numba_available):
    if not numba_available:
        pytest.skip("numba unavailable")
    parts = enumerate_parts(
        parse_family("family n: n*z | family n: exp(n*z)"), 64)
    pts = _points()
    bk.set_backend("numpy")
    r1, nw1 = sweep(parts, pts, 16)
    bk.set_backend("numba")
    r2, nw2 = sweep(parts, pts, 16)
    bk.set_backend("numpy")
    assert nw1 == nw2
    for name in ("sph_wmax", "mag_wmin", "mag_wmax"):
        a, b = getattr(r1, name), getattr(r2, name)
        finite = np.isfinite(a)
        assert (finite == np.isfinite(b)).all()
        err = np.abs(a[finite] - b[finite]) / (1 + np.abs(a[finite]))
        assert err.max() < 1e-12
    assert (r1.pole_any == r2.pole_any).all()


def test_integer_power_matches_binary_exponentiation():
    # all backends use the same multiply order, so powers of two are exact
    tape = compile_expr(ex.bind_n(parse_expr("z^n"), 8))
    vals, _ = bk.eval_points(tape, np.array([2 + 0j, -2 + 0j, 0.5j]))
    assert vals[0] == 256 + 0j
    assert vals[1] == 256 + 0j
    assert vals[2] == (0.5j) ** 8


def test_sweep_window_stats_shape():
    parts = enumerate_parts(parse_family("family n: n*z"), 64)
    pts = np.array([[0j, 1 + 0j], [2j, 1 + 1j]])
    res, nw = sweep(parts, pts, 16)
    assert nw == 4
    assert res.sph_wmax.shape == (4, 2, 2)
    assert res.mag_wmin.shape == (1, 4, 2, 2)
    # at z=1 magnitudes are 1..64: window minima 1, 17, 33, 49
    assert np.allclose(res.mag_wmin[0, :, 0, 1], [1, 17, 33, 49])
    assert np.allclose(res.mag_wmax[0, :, 0, 1], [16, 32, 48, 64])


def test_backend_env_selection(monkeypatch):
    monkeypatch.setenv("FATOUKIT_BACKEND", "numpy")
    bk.set_backend("auto")
    assert bk.active_backend() == "numpy"
    monkeypatch.delenv("FATOUKIT_BACKEND")
    bk.set_backend("numpy")
