import math
import random
from fractions import Fraction

import pytest

from binpleth.core import BPoly, compose, derivative, fdiff, is_int_valued, parse_bpoly
from binpleth.ivp import (
    RingFamily,
    c_n,
    chain_witness,
    dual_decompose,
    dual_decompose_direct,
    dual_decompose_split,
    graded_basis,
    inf_equality_check,
    local_basis,
    membership,
    parse_family,
    vp,
)

C = BPoly.basis
F = Fraction


def test_parse_family_round_trip():
    for s in ["int", "int@p=2", "int[1/6]", "dint:3", "dint:inf", "fdint:0", "fdint:inf"]:
        assert str(parse_family(s)) == s
    for bad in ["int@p=4", "dint:-1", "foo", "int[1/0]"]:
        with pytest.raises(ValueError):
            parse_family(bad)


def test_membership_examples():
    assert membership(C(2), "int")
    assert not membership(C(2), "dint:1")
    assert membership(C(2) * 2, "dint:inf")
    assert membership(C(2), "int@p=2")
    assert not membership(parse_bpoly("1/2*X"), "int@p=2")
    assert membership(parse_bpoly("1/3*X"), "int@p=2")
    assert not membership(C(2), "int[1/3]")
    assert membership(C(2), "int[1/2]")


def test_c_n_examples():
    assert [c_n(n) for n in range(7)] == [1, 1, 2, 6, 12, 60, 360]


def test_c_n_formula_against_factorisation():
    for n in range(30):
        want = 1
        for p in range(2, n + 1):
            if all(p % q for q in range(2, p)):
                want *= p ** (n // p)
        assert c_n(n) == want


@pytest.mark.parametrize(
    "family, diag",
    [
        ("int", [1] * 6),
        ("dint:inf", [1, 1, 2, 6, 12, 60]),
        ("fdint:inf", [1, 1, 2, 6, 12, 60]),
        ("dint:0", [1] * 6),
        ("int[1/1]", [math.factorial(n) for n in range(6)]),
        ("int@p=3", [1] * 6),
    ],
)
def test_graded_diagonals(family, diag):
    assert list(graded_basis(family, 5).diagonal) == diag


def test_dint1_diagonal_frozen():
    # oracle: brute force below
    assert list(graded_basis("dint:1", 6).diagonal) == [1, 1, 2, 6, 6, 30, 60]
    assert graded_basis("dint:1", 2).diagonal[2] > 1


def test_graded_basis_matches_direct_membership(rng):
    fams = ["int", "dint:1", "dint:2", "dint:inf", "fdint:1", "fdint:inf", "int[1/2]", "int@p=2"]
    for fam in fams:
        G = graded_basis(fam, 5)
        for e in G.elements:
            assert membership(e, fam), (fam, e)
        for _ in range(40):
            f = BPoly(F(rng.randint(-30, 30), rng.choice([1, 2, 3, 4, 6, 12])) for _ in range(6))
            if fam == "int@p=2":
                # the lattice is Int(Z); compare Z_(2)-integrality after clearing odd denominators
                odd = 1
                for c in f.coeffs:
                    den = c.denominator
                    while den % 2 == 0:
                        den //= 2
                    odd = math.lcm(odd, den)
                assert membership(f, fam) == G.contains(f * odd)
            else:
                assert membership(f, fam) == G.contains(f), (fam, f)


def test_dint_brute_force_oracle():
    # exhaustive over a small box of rational binomial coordinates, d = 4
    G = graded_basis("dint:1", 4)
    for a in range(12):
        f = BPoly([0, 0, F(a, 6), 0, 1])
        direct = is_int_valued(f) and is_int_valued(derivative(f, 1))
        assert G.contains(f) == direct


def test_fdint_large_shift_cross_check(rng):
    for _ in range(30):
        f = BPoly(F(rng.randint(-20, 20), rng.choice([1, 2, 6])) for _ in range(5))
        if not membership(f, "fdint:1"):
            continue
        for _ in range(5):
            h = rng.randint(-1000, 1000)
            assert is_int_valued(fdiff(f, h))


def test_monotone_chains():
    for d in range(9):
        for r in range(3):
            big = graded_basis(RingFamily("dint", r), d).lattice
            small = graded_basis(RingFamily("dint", r + 1), d).lattice
            assert all(row in big for row in small.basis_rows())
            fd = graded_basis(RingFamily("fdint", r), d).lattice
            assert all(row in big for row in fd.basis_rows())


def test_composition_closure_dint_inf(rng):
    basis = [C(n) * c_n(n) for n in range(5)]
    for _ in range(100):
        f = sum((b * rng.randint(-2, 2) for b in basis), BPoly())
        g = sum((b * rng.randint(-2, 2) for b in basis), BPoly())
        assert membership(compose(f, g), "dint:inf")


def test_local_basis():
    assert local_basis(2, 2) == C(2)
    assert local_basis(2, 3) == C(3) * 3
    assert local_basis(5, 3) == C(3) * 6
    for p in (2, 3, 5):
        for n in range(10):
            b = local_basis(p, n)
            assert membership(b, f"int@p={p}")
            unit = math.factorial(n) // p ** vp(math.factorial(n), p)
            assert vp(unit, p) == 0


def test_dual_examples():
    assert dual_decompose(C(2) * 2, BPoly(), 0)
    assert not dual_decompose(C(2), BPoly(), 0)
    assert dual_decompose(BPoly(), C(2), 0)


def test_dual_routes_agree(rng):
    pool = [C(n) * k for n in range(6) for k in (1, 2, 6, 12)]
    for _ in range(200):
        f = sum((rng.choice(pool) * rng.randint(-1, 1) for _ in range(2)), BPoly())
        g = sum((rng.choice(pool) * rng.randint(-1, 1) for _ in range(2)), BPoly())
        r = rng.randint(0, 2)
        assert dual_decompose_direct(f, g, r) == dual_decompose_split(f, g, r)


def test_chain_witness():
    assert chain_witness(0) == (2, C(2))
    assert chain_witness(0, kind="fdint") == (2, C(2))
    d, w = chain_witness(1, 10)
    assert d == 4
    assert membership(w, "dint:1") and not membership(w, "dint:2")
    assert chain_witness(1, 3) is None


def test_inf_equality():
    assert inf_equality_check(5)
    assert inf_equality_check(8)
