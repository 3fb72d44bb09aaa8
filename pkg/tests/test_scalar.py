from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from pclab.scalar import (
    ParseError,
    Polynomial,
    SingularMatrixError,
    UnknownVariableError,
    VariableMismatchError,
    determinant,
    identity_matrix,
    inverse,
    parse_expr,
    poly_arith,
    rational_matrix,
    solve_linear,
    substitute,
)

V = ("beta", "gamma", "delta", "eps")


def P(text, variables=V):
    return parse_expr(text, variables)


# -- parse_expr ------------------------------------------------------------------


def test_parse_linear():
    p = P("2 - 2*beta", ("beta",))
    assert p.terms == {(0,): Fraction(2), (1,): Fraction(-2)}


def test_parse_zero():
    assert P("0").is_zero()
    assert P("0").terms == {}


def test_parse_power_and_rational_factor():
    assert P("(beta-gamma)^2 * 1/2") == P("1/2*beta^2 - beta*gamma + 1/2*gamma^2")


def test_parse_unary_minus_and_nested():
    assert P("-(beta - (-gamma))") == P("-beta - gamma")
    assert P("-2^2") == P("-4")


def test_unary_minus_only_leads_a_group():
    with pytest.raises(ParseError) as exc:
        P("beta - -gamma")
    assert exc.value.position == 7


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        P("2*beta +* gamma")
    assert exc.value.position == 8


def test_parse_unbalanced():
    with pytest.raises(ParseError):
        P("(beta + 1")


def test_parse_unknown_variable():
    with pytest.raises(UnknownVariableError) as exc:
        P("beta + zeta")
    assert exc.value.position == 7


def test_eps_squared_reduces():
    assert P("eps^2") == P("1")
    assert P("eps^3 - eps") == P("0")
    assert P("(eps + 1)^2") == P("2*eps + 2")


# -- poly_arith -----------------------------------------------------------------


def test_arith_examples():
    d = P("beta - gamma")
    assert poly_arith(d, d, "mul") == P("beta^2 - 2*beta*gamma + gamma^2")
    assert poly_arith(d, poly_arith(d, None, "neg"), "add").is_zero()
    assert poly_arith(P("2 - 2*beta"), P("gamma"), "mul") == P("2*gamma - 2*beta*gamma")
    assert poly_arith(P("beta"), P("gamma"), "sub") == P("beta - gamma")


def test_arith_variable_mismatch():
    with pytest.raises(VariableMismatchError):
        poly_arith(P("beta", ("beta",)), P("x", ("x",)), "add")


# -- substitute -------------------------------------------------------------------


def test_substitute_examples():
    assert substitute(P("1/2*(beta-gamma)^2"), {"beta": 2, "gamma": 2}).is_zero()
    assert substitute(P("-2-2*gamma^2"), {"gamma": 1}) == P("-4")
    assert substitute(P("1/2*((2-gamma)^2-beta^2)"), {"beta": 2, "gamma": 0}).is_zero()


def test_substitute_partial_keeps_free():
    q = substitute(P("beta*gamma + delta"), {"beta": Fraction(1, 3)})
    assert q == P("1/3*gamma + delta")
    assert q.free_variables() == ("gamma", "delta")


def test_substitute_polynomial_value():
    assert substitute(P("beta^2"), {"beta": P("gamma + 1")}) == P("gamma^2 + 2*gamma + 1")


# -- linear algebra ---------------------------------------------------------------


def test_solve_identity():
    r = (P("beta"), P("gamma^2"))
    assert solve_linear(identity_matrix(2), r) == r


def test_solve_diagonal():
    out = solve_linear(rational_matrix([[2, 0], [0, 2]]), (P("2*beta"), P("0")))
    assert out == (P("beta"), P("0"))


def test_solve_null_block():
    p, q = P("beta + 1"), P("gamma")
    assert solve_linear(rational_matrix([[0, 1], [1, 0]]), (p, q)) == (q, p)


def test_singular():
    m = rational_matrix([[1, 2], [2, 4]])
    assert determinant(m) == 0
    with pytest.raises(SingularMatrixError):
        inverse(m)
    with pytest.raises(SingularMatrixError):
        solve_linear(m, (P("1"), P("0")))


def test_inverse_roundtrip():
    m = rational_matrix([[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    inv = inverse(m)
    prod = [[sum(m[i][k] * inv[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    assert prod == [list(r) for r in identity_matrix(3)]


# -- properties -------------------------------------------------------------------

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=6)
monomials = st.tuples(*[st.integers(0, 3)] * 3)
polys = st.dictionaries(monomials, rationals, max_size=5).map(
    lambda t: Polynomial(("beta", "gamma", "delta"), t))
points = st.fixed_dictionaries({"beta": rationals, "gamma": rationals, "delta": rationals})


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a - a).is_zero()


@given(polys, polys, points)
def test_substitution_is_homomorphism(a, b, pt):
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)
    assert (a + b).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)


@given(polys)
def test_print_parse_roundtrip(a):
    assert parse_expr(str(a), a.variables) == a


@given(st.integers(0, 9), rationals)
def test_eps_powers(k, c):
    p = Polynomial(("eps",), {(k,): c})
    expected = Polynomial(("eps",), {(k % 2,): c})
    assert p == expected


@settings(max_examples=60)
@given(st.lists(st.lists(rationals, min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(polys, min_size=3, max_size=3))
def test_solve_linear_exact_residual(rows, rhs):
    m = rational_matrix(rows)
    if determinant(m) == 0:
        with pytest.raises(SingularMatrixError):
            solve_linear(m, rhs)
        return
    x = solve_linear(m, rhs)
    for i in range(3):
        assert sum((x[k] * m[i][k] for k in range(3)), Polynomial.zero(x[0].variables)) == rhs[i]
