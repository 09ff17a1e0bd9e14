from fatoukit import expr as ex
from fatoukit.family import (Member, enumerate_members, fingerprint,
                             intersect_families, polynomial_form)
from fatoukit.parser import parse_expr, parse_family


def test_enumerate_parametric_ascending():
    ms = enumerate_members(parse_family("family n: n*z"), 3)
    assert [m.n for m in ms] == [1, 2, 3]
    assert [ex.to_text(m.expr) for m in ms] == ["z", "2*z", "3*z"]


def test_enumerate_union_round_robin():
    ms = enumerate_members(parse_family("family n: exp(n*z) | family n: z^n"), 4)
    assert [ex.to_text(m.expr) for m in ms] == ["exp(z)", "z", "exp(2*z)",
                                                "z^2"]


def test_enumerate_semigroup_words_deduped():
    ms = enumerate_members(parse_family("semigroup L=2: z^2; 2*z"), 100)
    assert len(ms) == 6  # z^2, 2z, z^4, 2z^2, (2z)^2, 4z


def test_enumerate_finite_family_short():
    ms = enumerate_members(parse_family("set: z; z^2"), 10)
    assert len(ms) == 2


def test_enumerate_dedups_constant_in_n():
    ms = enumerate_members(parse_family("family n: z+1"), 10)
    assert len(ms) == 1


def test_dedup_soundness():
    specs = ["family n: n*z", "family n: exp(n*z) | family n: z^n",
             "semigroup L=3: 2*z; z^2"]
    for text in specs:
        ms = enumerate_members(parse_family(text), 40)
        fps = [fingerprint(m) for m in ms]
        assert len(fps) == len(set(fps))


def test_fingerprint_word_equals_parametric():
    two_z = enumerate_members(parse_family("family n: n*z"), 2)[1]
    word = Member.from_word((parse_expr("2*z", allow_n=False),), (0,))
    assert fingerprint(two_z) == fingerprint(word)


def test_fingerprint_distinguishes_members():
    ms = enumerate_members(parse_family("family n: n*z"), 2)
    assert fingerprint(ms[0]) != fingerprint(ms[1])


def test_fingerprint_composition_identity():
    double = parse_expr("2*z", allow_n=False)
    quad = parse_expr("4*z", allow_n=False)
    composed = Member.from_word((double,), (0, 0))
    direct = Member.from_expr(quad)
    assert fingerprint(composed) == fingerprint(direct)


def test_fingerprint_pole_falls_back():
    from fatoukit.family import PROBE_POINTS
    pole_at_probe = ex.div(ex.Const(1 + 0j),
                           ex.sub(ex.Z(), ex.Const(PROBE_POINTS[0])))
    a = Member.from_expr(pole_at_probe)
    b = Member.from_expr(ex.div(ex.Const(2 + 0j),
                                ex.sub(ex.Z(), ex.Const(PROBE_POINTS[0]))))
    assert fingerprint(a) != fingerprint(b)


def test_word_evaluation_is_composition_bitwise():
    gens = (parse_expr("z^2", allow_n=False),
            parse_expr("2*z+1i", allow_n=False))
    word = Member.from_word(gens, (0, 1))
    for z in (0.3 + 0.7j, -1.1 + 0.2j, 2 - 2j):
        inner = ex.evaluate(gens[0], z)
        outer = ex.evaluate(gens[1], inner)
        assert ex.evaluate(word.expr, z) == outer  # identical float path


def test_word_derivative_chain_rule():
    gens = (parse_expr("z^2", allow_n=False),
            parse_expr("2*z", allow_n=False))
    word = Member.from_word(gens, (0, 1))  # z^2 applied first -> 2 z^2
    d = word.derivative
    for z in (0.5 + 0.5j, 1 - 2j):
        inner = ex.evaluate(gens[0], z)
        chain = ex.evaluate(ex.differentiate(gens[1]), inner) * \
            ex.evaluate(ex.differentiate(gens[0]), z)
        assert abs(ex.evaluate(d, z) - chain) < 1e-12 * (1 + abs(chain))


def test_intersect_disjoint_linear_families():
    inter = intersect_families(parse_family("family n: n*z"),
                               parse_family("family n: n*(z-1/2)"), 32)
    assert inter.members == ()


def test_intersect_shared_exponential_part():
    a = parse_family("family n: exp(n*z) | family n: z^n")
    b = parse_family("family n: exp(n*z) | family n: (z-1.5)^n")
    inter = intersect_families(a, b, 32)
    assert 10 <= len(inter.members) <= 32
    for body in inter.members:
        assert "exp" in ex.to_text(body)


def test_intersect_idempotent():
    spec = parse_family("family n: n*z")
    inter = intersect_families(spec, spec, 8)
    got = {ex.to_text(m) for m in inter.members}
    want = {ex.to_text(m.expr) for m in enumerate_members(spec, 8)}
    assert got == want


def test_polynomial_form_flags():
    exp_member = enumerate_members(parse_family("family n: exp(n*z)"), 1)[0]
    coeffs, reason = polynomial_form(exp_member)
    assert coeffs is None and reason == "NOT_POLYNOMIAL"
    big = enumerate_members(parse_family("family n from 65: z^n"), 1)[0]
    coeffs, reason = polynomial_form(big)
    assert coeffs is None and reason == "DEGREE_EXCEEDED"
