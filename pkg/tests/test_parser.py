import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fatoukit import expr as ex
from fatoukit.family import (FiniteSet, Parametric, Semigroup, UnionSpec,
                             print_family)
from fatoukit.parser import ParseError, parse_expr, parse_family


def test_parse_parametric():
    spec = parse_family("family n: n*z")
    assert isinstance(spec, Parametric)
    assert spec.n_from == 1
    assert spec.expr == ex.Mul(ex.N(), ex.Z())


def test_parse_union():
    spec = parse_family("family n: exp(n*z) | family n: z^n")
    assert isinstance(spec, UnionSpec)
    assert len(spec.parts) == 2
    assert all(isinstance(p, Parametric) for p in spec.parts)


def test_parse_semigroup():
    spec = parse_family("semigroup L=3: 2*z; z^2")
    assert isinstance(spec, Semigroup)
    assert spec.max_word_len == 3
    assert len(spec.generators) == 2


def test_parse_finite_set():
    spec = parse_family("set: z; z^2; z^3")
    assert isinstance(spec, FiniteSet)
    assert len(spec.members) == 3


def test_parse_from_clause():
    spec = parse_family("family n from 2: n*z")
    assert spec.n_from == 2


def test_syntax_error_carries_position():
    with pytest.raises(ParseError) as err:
        parse_family("family n: n*+z")
    assert err.value.pos == 12


def test_unknown_identifier():
    with pytest.raises(ParseError, match="unknown identifier"):
        parse_family("family n: n*w")


def test_n_rejected_in_finite_set():
    with pytest.raises(ParseError, match="'n' is not allowed"):
        parse_family("set: n*z")


def test_n_rejected_in_semigroup():
    with pytest.raises(ParseError, match="'n' is not allowed"):
        parse_family("semigroup L=2: n*z")


def test_trailing_input_rejected():
    with pytest.raises(ParseError, match="trailing"):
        parse_family("family n: n*z extra")


def test_imaginary_literals():
    assert parse_expr("2i") == ex.Const(2j)
    assert parse_expr("1+2i") == ex.Const(1 + 2j)
    assert parse_expr("1.5e-2") == ex.Const(0.015 + 0j)


def test_power_is_right_associative():
    e = parse_expr("z^2^3", allow_n=False)
    # exponent folds to 8
    assert e == ex.Pow(ex.Z(), ex.Const(8 + 0j))


def test_unary_minus_binds_below_power():
    e = parse_expr("-z^2", allow_n=False)
    assert isinstance(e, ex.Neg)


# --- round-trip property over grammar-generated specs ---------------------

_atoms = st.sampled_from([ex.Z(), ex.N(), ex.Const(2 + 0j),
                          ex.Const(1.5 + 0j), ex.Const(2j),
                          ex.Const(-0.25 + 0j)])


def _exprs(depth):
    if depth == 0:
        return _atoms
    sub = _exprs(depth - 1)
    return st.one_of(
        _atoms,
        st.builds(ex.add, sub, sub),
        st.builds(ex.sub, sub, sub),
        st.builds(ex.mul, sub, sub),
        st.builds(ex.div, sub, sub),
        st.builds(lambda a: ex.call("exp", a), sub),
        st.builds(lambda a: ex.call("sin", a), sub),
        st.builds(lambda a: ex.call("cos", a), sub),
        st.builds(lambda b, k: ex.powe(b, ex.Const(complex(k))), sub,
                  st.integers(-3, 5)),
        st.builds(lambda b: ex.powe(b, ex.N()), sub),
        st.builds(ex.neg, sub),
    )


_specs = st.one_of(
    st.builds(lambda e, nf: Parametric(e, n_from=nf), _exprs(3),
              st.integers(1, 5)),
    st.builds(lambda es: FiniteSet(tuple(ex.bind_n(e, 1) for e in es)),
              st.lists(_exprs(2), min_size=1, max_size=3)),
    st.builds(lambda es, L: Semigroup(tuple(ex.bind_n(e, 1) for e in es), L),
              st.lists(_exprs(2), min_size=1, max_size=3),
              st.integers(1, 4)),
)


@given(st.lists(_specs, min_size=1, max_size=3))
@settings(max_examples=150, deadline=None)
def test_round_trip(parts):
    spec = parts[0] if len(parts) == 1 else UnionSpec(tuple(parts))
    assert parse_family(print_family(spec)) == spec
