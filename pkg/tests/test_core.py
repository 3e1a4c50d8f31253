import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binpleth.core import (
    BPoly,
    DualElem,
    MPoly,
    PolyParseError,
    arith,
    binom_poly,
    compose,
    derivative,
    evaluate,
    fdiff,
    fdiff_Y,
    from_binomial,
    is_int_valued,
    parse_bpoly,
    parse_poly,
    to_binomial,
)
from conftest import int_bpolys, rat_bpolys

F = Fraction
C = BPoly.basis
X = MPoly.var("X")


def test_binom_poly_small():
    assert binom_poly(0) == MPoly.const(1)
    assert binom_poly(1) == X
    assert binom_poly(2) == (X**2 - X) * F(1, 2)
    assert binom_poly(7).terms[(7,)] == F(1, 5040)


@pytest.mark.parametrize(
    "text, coeffs",
    [("X^2", [0, 1, 2]), ("X^3", [0, 1, 6, 6]), ("C(X,5)", [0, 0, 0, 0, 0, 1])],
)
def test_to_binomial(text, coeffs):
    assert to_binomial(parse_poly(text)) == BPoly(coeffs)


def test_from_binomial():
    assert from_binomial(BPoly([0, 1, 2])) == X**2
    assert from_binomial(BPoly([0, 0, 1])) == (X**2 - X) * F(1, 2)
    assert from_binomial(BPoly([])).is_zero()


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=12), max_size=13))
def test_round_trip(coeffs):
    f = MPoly(("X",), {(k,): c for k, c in enumerate(coeffs)})
    assert from_binomial(to_binomial(f)) == f


def test_arith_examples():
    assert arith(C(1), C(1), "mul") == BPoly([0, 1, 2])
    assert arith(C(2), C(2), "add") == BPoly([0, 0, 2])
    assert arith(C(2), C(1), "mul") == BPoly([0, 0, 2, 3])
    assert arith(C(2), 3, "scale") == BPoly([0, 0, 3])
    assert arith(C(2), C(1), "sub") == BPoly([0, -1, 1])
    with pytest.raises(ValueError):
        arith(C(1), C(1), "div")


@settings(max_examples=80, deadline=None)
@given(rat_bpolys(5), rat_bpolys(5))
def test_mul_methods_agree(f, g):
    assert arith(f, g, "mul", method="values") == arith(f, g, "mul", method="monomial")


def test_compose_examples():
    assert compose(C(2), BPoly([1, 1])) == BPoly([0, 1, 1])
    assert compose(C(2), C(2)) == BPoly([0, 0, 0, 3, 3])
    f = BPoly([3, -1, 0, 2])
    assert compose(f, BPoly.x()) == f
    assert compose(BPoly.x(), f) == f
    assert compose(f, BPoly.const(4)) == BPoly.const(f(4))


@settings(max_examples=100, deadline=None)
@given(int_bpolys(5), int_bpolys(5))
def test_composition_closure(f, g):
    assert compose(f, g).has_integral_coeffs()


@settings(max_examples=50, deadline=None)
@given(rat_bpolys(3), rat_bpolys(3))
def test_compose_matches_monomial_substitution(f, g):
    want = from_binomial(f).substitute({"X": from_binomial(g)})
    assert from_binomial(compose(f, g)) == want


def test_derivative_examples():
    assert derivative(C(2), 1) == BPoly([F(-1, 2), 1])
    f = BPoly([1, 2, 3])
    assert derivative(f, 0) == f
    assert from_binomial(derivative(to_binomial(X**3), 2)) == X * 6


def test_fdiff_examples():
    assert fdiff(C(2), 1) == C(1)
    assert fdiff(C(2), 0) == BPoly([F(-1, 2), 1])
    assert fdiff(BPoly.const(7), 1).is_zero()


@settings(max_examples=60, deadline=None)
@given(rat_bpolys(4), st.fractions(min_value=-5, max_value=5, max_denominator=4))
def test_fdiff_matches_fdiff_Y(f, h):
    g = fdiff_Y(f)
    want = from_binomial(fdiff(f, h))
    assert g.substitute({"Y": MPoly.const(h)}).with_variables(("X",)) == want.with_variables(("X",))


def test_delta_product_rule(rng):
    # Delta_Y(fg)(X) = Delta_Y f(X) g(X+Y) + f(X) Delta_Y g(X)
    XY = ("X", "Y")
    shift = {"X": MPoly.var("X", XY) + MPoly.var("Y", XY)}
    for _ in range(100):
        f = BPoly(F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(rng.randint(0, 4)))
        g = BPoly(F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(rng.randint(0, 4)))
        lhs = fdiff_Y(f * g)
        gm = from_binomial(g).with_variables(XY)
        rhs = fdiff_Y(f) * gm.substitute(shift) + from_binomial(f).with_variables(XY) * fdiff_Y(g)
        assert lhs.with_variables(XY) == rhs.with_variables(XY)


def test_eval_examples():
    assert evaluate(C(2), 5) == 10
    assert evaluate(to_binomial(X**2), DualElem(1, 1)) == DualElem(1, 2)
    assert evaluate(C(2), DualElem(0, 1)) == DualElem(0, F(-1, 2))
    assert evaluate(C(3), F(1, 2)) == F(1, 16)
    assert evaluate(C(2), -3) == 6


def test_dual_evaluation_identity(rng):
    for _ in range(200):
        f = BPoly(F(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(rng.randint(0, 6)))
        a, b = F(rng.randint(-7, 7), rng.randint(1, 3)), F(rng.randint(-7, 7), rng.randint(1, 3))
        got = evaluate(f, DualElem(a, b))
        if not isinstance(got, DualElem):
            got = DualElem(got, 0)
        assert got == DualElem(evaluate(f, a), evaluate(derivative(f, 1), a) * b)


def test_dual_arithmetic():
    e = DualElem(0, 1)
    assert e * e == DualElem(0, 0)
    assert (DualElem(2, 3) ** 3) == DualElem(8, 36)
    assert DualElem(1, 2) - 1 == DualElem(0, 2)


def test_is_int_valued_examples():
    assert is_int_valued(C(2))
    assert not is_int_valued(to_binomial(X * F(1, 2)))
    assert is_int_valued(to_binomial((X**2 + X) * F(1, 2)))
    assert is_int_valued(BPoly())


@settings(max_examples=300, deadline=None)
@given(rat_bpolys(8))
def test_int_valued_routes_agree(f):
    assert is_int_valued(f) == f.has_integral_coeffs()


def test_parser():
    assert parse_bpoly("3*C(X,3)+3*C(X,4)") == BPoly([0, 0, 0, 3, 3])
    assert parse_bpoly("-X + 1") == BPoly([1, -1])
    assert parse_bpoly("1/2*X^2 - 1/2*X") == C(2)
    assert parse_bpoly(" C(X,2)*C(X,1) ") == BPoly([0, 0, 2, 3])
    f = parse_poly("C(X,1)*C(Y,2)")
    assert f.variables == ("X", "Y")
    for bad in ["C(X,)", "X^", "1/0", "Z", "3**X", ""]:
        with pytest.raises(PolyParseError):
            parse_poly(bad)


def test_bpoly_text_round_trip(rng):
    for _ in range(50):
        f = BPoly(F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(rng.randint(0, 6)))
        assert parse_bpoly(str(f)) == f


def test_zero_is_empty():
    assert BPoly([0, 0]).coeffs == ()
    assert BPoly().degree() == -1
