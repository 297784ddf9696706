"""Exact polynomial ring: examples, properties, and the linear solver."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mbrwa.polyring import (
    InconsistentSystem,
    LinearSystem,
    Poly,
    VarSet,
    VarSetMismatch,
    matrix_rank,
    solve_linear,
    solve_nullspace,
)

XY = VarSet("x", "y")
X = Poly.var(XY, "x")
Y = Poly.var(XY, "y")


class TestArithmetic:
    def test_add_cancellation(self):
        assert (X + 1) + (X - 1) == 2 * X

    def test_difference_of_squares(self):
        assert (X + Y) * (X - Y) == X**2 - Y**2

    def test_neg_zero(self):
        assert -Poly.zero(XY) == Poly.zero(XY)
        assert (-Poly.zero(XY)).is_zero

    def test_no_stored_zero_coefficients(self):
        p = X - X
        assert p.terms == {}

    def test_varset_mismatch(self):
        other = Poly.var(VarSet("x", "z"), "x")
        with pytest.raises(VarSetMismatch):
            X + other

    def test_scalar_coercion(self):
        assert Fraction(1, 2) * (X + X) == X
        assert 1 - X == -(X - 1)


class TestDiff:
    def test_power_rule(self):
        assert (X**2 * Y).diff("x") == 2 * X * Y

    def test_constant(self):
        assert Poly.const(XY, 7).diff("x").is_zero

    def test_linear_factor(self):
        assert (X * Y).diff("y") == X

    def test_unknown_var(self):
        with pytest.raises(KeyError):
            X.diff("w")


class TestSubstitute:
    def test_defining_substitution(self):
        p = X - X * Y  # stand-in for eliminating x via x = x*y
        assert p.substitute({"x": X * Y}) == X * Y - X * Y**2

    def test_binomial(self):
        assert (X**2).substitute({"x": Y + 1}) == Y**2 + 2 * Y + 1

    def test_empty_is_identity(self):
        p = X**2 + 3 * Y
        assert p.substitute({}) == p

    def test_simultaneous(self):
        # x <-> y swap must not cascade
        p = X + 2 * Y
        assert p.substitute({"x": Y, "y": X}) == Y + 2 * X

    def test_unknown_var(self):
        with pytest.raises(KeyError):
            X.substitute({"w": Y})


class TestEval:
    def test_basic(self):
        assert (X**2 + Y).eval({"x": 2, "y": 1}) == 5

    def test_zero(self):
        assert Poly.zero(XY).eval({"x": 3, "y": 4}) == 0

    def test_exact_rational(self):
        v = (X * Y).eval({"x": Fraction(1, 3), "y": Fraction(3, 5)})
        assert v == Fraction(1, 5)
        assert isinstance(v, Fraction)

    def test_float_point(self):
        assert (X + Y).eval({"x": 0.5, "y": 0.25}) == 0.75

    def test_unbound(self):
        with pytest.raises(KeyError):
            X.eval({"x": 1})


class TestDisplay:
    def test_graded_lex_string(self):
        p = X**2 + X * Y + Y + 1
        assert str(p) == "x^2 + x*y + y + 1"

    def test_negative_leading(self):
        assert str(-X + 1) == "-x + 1"


# ---------------------------------------------------------------------------
# property tests
# ---------------------------------------------------------------------------

VARS3 = VarSet("a", "b", "c")


@st.composite
def polys(draw, vars=VARS3, max_terms=5, max_exp=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_exp)) for _ in range(len(vars)))
        num = draw(st.integers(-9, 9))
        den = draw(st.integers(1, 9))
        terms[e] = terms.get(e, Fraction(0)) + Fraction(num, den)
    return Poly(vars, terms)


rationals = st.fractions(
    min_value=-5, max_value=5, max_denominator=7
)


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert p + q == q + p
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r


@given(polys(), polys(), st.sampled_from(VARS3.names))
def test_leibniz_rule(p, q, v):
    assert (p * q).diff(v) == p.diff(v) * q + p * q.diff(v)


@given(polys(), polys(), st.sampled_from(VARS3.names), rationals, rationals, rationals)
@settings(max_examples=50)
def test_eval_commutes_with_substitute(p, g, v, a, b, c):
    point = {"a": a, "b": b, "c": c}
    substituted_then_evaled = p.substitute({v: g}).eval(point)
    point_then = dict(point)
    point_then[v] = g.eval(point)
    assert substituted_then_evaled == p.eval(point_then)


@st.composite
def matrices(draw):
    nrows = draw(st.integers(1, 5))
    ncols = draw(st.integers(1, 5))
    return [
        [Fraction(draw(st.integers(-4, 4))) for _ in range(ncols)]
        for _ in range(nrows)
    ]


@given(matrices())
def test_nullspace_vectors_are_in_kernel(m):
    basis = solve_nullspace(LinearSystem(m))
    for vec in basis:
        for row in m:
            assert sum(a * x for a, x in zip(row, vec)) == 0
    assert matrix_rank(m) + len(basis) == len(m[0])


class TestLinearSolver:
    def test_nullspace_simple(self):
        basis = solve_nullspace(LinearSystem([[1, -1]]))
        assert basis == [[Fraction(1), Fraction(1)]]

    def test_nullspace_identity(self):
        eye = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        assert solve_nullspace(LinearSystem(eye)) == []

    def test_nonhomogeneous_rejected(self):
        with pytest.raises(ValueError):
            solve_nullspace(LinearSystem([[1, 0]], rhs=[1]))

    def test_solve_exact(self):
        x = solve_linear(LinearSystem([[2, 0], [0, 3]], rhs=[1, 1]))
        assert x == [Fraction(1, 2), Fraction(1, 3)]

    def test_solve_inconsistent(self):
        with pytest.raises(InconsistentSystem):
            solve_linear(LinearSystem([[1, 0], [1, 0]], rhs=[1, 2]))

    def test_ragged_rejected(self):
        with pytest.raises(ValueError):
            LinearSystem([[1, 2], [1]])
