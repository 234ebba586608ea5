import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coxhecke import CoxeterMatrix, build_ball
from coxhecke.errors import BallExceeded
from coxhecke.hecke import (
    HeckeVec,
    f_coeff,
    iter_products,
    max_f_degree,
    t_basis,
    t_mult,
    t_mult_gen,
    t_mult_left,
    xi_to_laurent,
)
from coxhecke.laurent import ONE, XI, expand_in
from oracles import BruteGroup, normalized_product


def test_quadratic_relation(ball):
    b = ball("A2~", 4)
    s, t = b.parse_word("s"), b.parse_word("t")
    st = b.parse_word("s.t")
    assert t_mult_gen(t_basis(b, s), 0) == HeckeVec(b, {0: ONE, s: XI})
    assert t_mult_gen(t_basis(b, 0), 0) == t_basis(b, s)
    assert t_mult_gen(t_basis(b, st), 1) == HeckeVec(b, {s: ONE, st: XI})
    assert t_mult_gen(t_basis(b, 0), 1, "left") == t_basis(b, t)


def test_additive_products_are_basis_elements(ball):
    b = ball("346", 6)
    x, y = b.parse_word("s.t"), b.parse_word("r.s")
    assert t_mult(b, x, y) == t_basis(b, b.multiply(x, y))


def test_f_coefficient_examples(ball):
    b = ball("A2~", 6)
    s = b.parse_word("s")
    assert f_coeff(b, s, s, s).coeffs == (0, 1)
    assert f_coeff(b, s, s, 0).coeffs == (1,)
    x = b.parse_word("s.t.r")
    assert f_coeff(b, x, b.inverse(x), 0).coeffs == (1,)
    assert f_coeff(b, x, x, 0).coeffs == ()
    d = build_ball(CoxeterMatrix.dihedral(3), 6)
    w0 = d.dihedral_data(0, 1).longest
    assert f_coeff(d, w0, w0, w0).degree == 3


@pytest.mark.parametrize("name,radius", [("A2~", 7), ("346", 7), ("inf3", 6)])
def test_products_match_unnormalized_oracle(ball, name, radius):
    from conftest import GROUPS

    b = ball(name, radius)
    G = BruteGroup(GROUPS[name].m, radius)
    for x in b.ids_up_to(radius):
        for y in b.ids_up_to(radius - b.lengths[x]):
            got = {z: dict(p.items()) for z, p in t_mult(b, x, y).items()}
            assert got == normalized_product(G, x, y)


def test_left_and_right_routes_agree(ball):
    b = ball("34inf", 7)
    for x in b.ids_up_to(4):
        for y in b.ids_up_to(7 - b.lengths[x]):
            assert t_mult(b, x, y) == t_mult_left(b, x, y)


def test_survey_engine_matches_laurent_route(ball):
    b = ball("346", 7)
    for x, y, vec in iter_products(b, 7):
        lp = t_mult(b, x, y)
        assert set(vec) == set(lp.terms)
        for z, c in vec.items():
            assert xi_to_laurent(c) == lp[z]
            assert expand_in(lp[z], "XI").coeffs == c


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_associativity(data):
    b = _assoc_ball()
    ids = st.integers(0, len(b.ids_up_to(3)) - 1)
    x, y, z = data.draw(ids), data.draw(ids), data.draw(ids)
    left = _times(b, t_mult(b, x, y), z)
    right = HeckeVec(b, {}, "T")
    for w, p in t_mult(b, y, z).items():
        right = right + t_mult(b, x, w).scale(p)
    assert left == right


_cache = {}


def _assoc_ball():
    if "b" not in _cache:
        _cache["b"] = build_ball(CoxeterMatrix.triangle(3, 4, 6), 9)
    return _cache["b"]


def _times(b, h, z):
    for s in b.words[z]:
        h = t_mult_gen(h, s)
    return h


def test_budget_errors(ball):
    b = ball("A2~", 4)
    x = b.parse_word("s.t.s")
    with pytest.raises(BallExceeded):
        t_mult(b, x, x)
    with pytest.raises(ValueError):
        t_mult_gen(HeckeVec(b, {0: ONE}, "C"), 0)


def test_max_degree_rank_one():
    b = build_ball(CoxeterMatrix.rank_one(), 1)
    survey = max_f_degree(b)
    assert survey.max_degree == 1
    assert survey.witnesses == [(1, 1, 1)]


def test_max_degree_examples(ball):
    assert max_f_degree(ball("A2~", 12)).max_degree == 3
    assert max_f_degree(ball("inf3", 8)).max_degree == 1


def test_full_budget_skips_nothing(ball):
    b = ball("A2~", 8)
    assert max_f_degree(b).pairs_skipped == 0
    assert max_f_degree(b, 6).pairs_skipped > 0


def test_witnesses_are_first_in_scan_order(ball):
    b = ball("A2~", 8)
    survey = max_f_degree(b)
    assert survey.witnesses[0] == (b.parse_word("s.t.s"),) * 3
