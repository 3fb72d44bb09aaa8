import pytest
from hypothesis import given, strategies as st

from pclab.conditions import ConditionSet, vanishing
from pclab.scalar import parse_expr

V = ("beta", "gamma", "eps")


def P(t):
    return parse_expr(t, V)


def C(*texts, nonzero=()):
    return vanishing(V, [P(t) for t in texts], nonzero=[P(q) for q in nonzero])


def test_empty_is_always():
    assert C().verdict == "holds"
    assert C("0").is_always


def test_nonzero_constant_is_never():
    assert C("3").verdict == "fails"


def test_linear_elimination():
    c = C("beta - gamma")
    assert c.verdict == "holds_iff"
    assert c.holds_at({"beta": 2, "gamma": 2})
    assert not c.holds_at({"beta": 2, "gamma": 1})


def test_square_root_and_unit_stripping():
    assert C("(beta - gamma)^2").equivalent(C("beta - gamma"))
    assert C("gamma*(beta - 1)", nonzero=["gamma"]).equivalent(C("beta - 1", nonzero=["gamma"]))


def test_side_constraint_kills_locus():
    assert C("gamma", nonzero=["gamma"]).verdict == "fails"


def test_no_real_zero():
    assert C("gamma^2 + 1").verdict == "fails"
    assert C("2*gamma^2 + gamma + 2").verdict == "fails"


def test_incompatible_univariate():
    assert C("beta - 1", "beta - 2").verdict == "fails"
    assert C("beta^2 - 1", "beta - 1").holds_at({"beta": 1, "gamma": 0})


def test_sign_variable():
    assert C("eps - 2").verdict == "fails"
    c = C("beta - eps - 1")
    assert c.holds_at({"beta": 2, "eps": 1, "gamma": 5})
    assert c.holds_at({"beta": 0, "eps": -1, "gamma": 5})


def test_conjoin_and_implies():
    a, b = C("beta - gamma"), C("gamma - 2")
    both = a.conjoin(b)
    assert both.implies(a) and both.implies(b)
    assert not a.implies(both)
    assert both.equivalent(C("beta - 2", "gamma - 2"))


def test_never_implies_everything():
    assert ConditionSet.never(V).implies(C("beta"))
    assert not C("beta").implies(ConditionSet.never(V))


def test_holds_at_needs_all_variables():
    with pytest.raises(ValueError):
        C("beta - gamma").holds_at({"beta": 1})


def test_describe():
    assert C("beta - gamma").describe() in (["beta = gamma"], ["gamma = beta"])
    assert str(ConditionSet.never(V)) == "false"
    assert str(C()) == "true"


@given(st.integers(-5, 5), st.integers(-5, 5))
def test_point_loci(b, g):
    c = C(f"beta - ({b})", f"gamma - ({g})")
    assert c.holds_at({"beta": b, "gamma": g, "eps": 1})
    assert not c.holds_at({"beta": b + 1, "gamma": g, "eps": 1})


@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
def test_reduce_vanishes_on_generators(a, b, c):
    # a*beta + b*gamma + c vanishes on its own locus
    if a == 0 and b == 0:
        return
    lin = P(f"({a})*beta + ({b})*gamma + ({c})")
    cs = vanishing(V, [lin])
    assert cs.reduce(lin * P("beta + gamma^2")).is_zero()
