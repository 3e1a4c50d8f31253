import itertools
import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binpleth.intlattice import (
    IntLattice,
    IntMat,
    compare,
    det,
    hnf,
    lattice_from_congruences,
    member,
    span_member,
)

F = Fraction

small_mats = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=1, max_size=4)
)


def _is_hnf(H):
    rows = [r for r in H.tolist()]
    pivots = []
    seen_zero = False
    for r in rows:
        if not any(r):
            seen_zero = True
            continue
        assert not seen_zero, "zero row above a nonzero row"
        c = next(i for i, x in enumerate(r) if x)
        assert r[c] > 0
        if pivots:
            assert c > pivots[-1][0]
        pivots.append((c, r[c]))
    for i, (c, piv) in enumerate(pivots):
        for k in range(i):
            assert 0 <= rows[k][c] < piv


def test_hnf_examples():
    H, U = hnf([[2, 0], [0, 3]])
    assert H.tolist() == [[2, 0], [0, 3]]
    H, U = hnf([[0, 1], [1, 0]])
    assert H.tolist() == [[1, 0], [0, 1]]
    H, U = hnf([[2, 4], [1, 3]])
    assert H.tolist() == [[1, 1], [0, 2]]
    assert abs(det(H.tolist())) == 2


@settings(max_examples=150, deadline=None)
@given(small_mats)
def test_hnf_properties(M):
    H, U = hnf(M)
    _is_hnf(H)
    assert (U @ IntMat.of(M)).tolist() == H.tolist()
    assert abs(det(U.tolist())) == 1
    H2, _ = hnf(H)
    assert H2.tolist() == H.tolist()


def test_det_preserved_random(rng):
    for _ in range(100):
        M = [[rng.randint(-6, 6) for _ in range(4)] for _ in range(4)]
        H, _ = hnf(M)
        assert abs(det(H.tolist())) == abs(det(M))


def test_intmat_json_round_trip():
    M = IntMat.of([[1, -2, 3], [0, 4, 5]])
    assert IntMat.from_json(M.to_json()) == M
    assert json.loads(M.to_json())


def _brute_members(gens, box):
    out = set()
    for c in itertools.product(range(-box, box + 1), repeat=len(gens)):
        out.add(tuple(sum(ci * g[j] for ci, g in zip(c, gens)) for j in range(len(gens[0]))))
    return out


def test_member_brute_force(rng):
    for _ in range(40):
        d = rng.randint(1, 3)
        while True:
            rows = [[F(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(d)] for _ in range(d)]
            if det(rows):
                break
        L = IntLattice(rows)
        inside = _brute_members(rows, 2)
        for v in inside:
            c = member(L, v)
            assert c is not None
            assert all(sum(ci * r[j] for ci, r in zip(c, rows)) == v[j] for j in range(d))
        # a vector off the lattice: solve rationally, nudge one coordinate to non-integer
        v = [sum(r[j] for r in rows) for j in range(d)]
        w = [x + F(1, 7 * L.scale) for x in v]
        assert member(L, w) is None


def test_compare_brute_force(rng):
    for _ in range(60):
        d = rng.randint(1, 3)
        mk = lambda: [[rng.randint(-3, 3) for _ in range(d)] for _ in range(d)]
        A, B = mk(), mk()
        if not det(A) or not det(B):
            continue
        L1, L2 = IntLattice(A), IntLattice(B)
        in2 = all(span_member(B, r) is not None for r in A)
        in1 = all(span_member(A, r) is not None for r in B)
        rel, idx = compare(L1, L2)
        if in1 and in2:
            assert rel == "equal" and idx == 1
        elif in2:
            assert rel == "subset" and idx == abs(det(A) / det(B))
        elif in1:
            assert rel == "superset" and idx == abs(det(B) / det(A))
        else:
            assert rel == "incomparable"


def test_compare_rank_deficient():
    L1 = IntLattice([[1, 0]])
    L2 = IntLattice([[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        compare(L1, L2)


def test_compare_example():
    assert compare(IntLattice([[2, 0], [0, 2]]), IntLattice([[1, 0], [0, 1]])) == ("subset", 4)


def _brute_congruence(d, constraints, D, box):
    pts = []
    for num in itertools.product(range(-box, box + 1), repeat=d):
        a = [F(x, D) for x in num]
        if all(sum(c * x for c, x in zip(cons, a)).denominator == 1 for cons in constraints):
            pts.append(tuple(a))
    return set(pts)


@pytest.mark.parametrize(
    "d, cons, expected",
    [
        (2, [[0, F(1, 2)]], [[F(1, 2), 0], [0, 2]]),
        (1, [[F(1, 3)]], [[3]]),
        (2, [[1, 0], [0, 1]], [[1, 0], [0, 1]]),
    ],
)
def test_congruence_examples(d, cons, expected):
    L = lattice_from_congruences(d, cons)
    assert L == IntLattice(expected)
    D = L.scale if L.scale > 1 else 1
    D = max(D, max(F(x).denominator for c in cons for x in c))
    brute = _brute_congruence(d, cons, D, 6 * D)
    for v in brute:
        assert v in L
    for v in itertools.product(*[[F(k, D) for k in range(-2 * D, 2 * D + 1)]] * d):
        if v in L:
            assert v in brute


def test_congruence_random_against_brute(rng):
    for _ in range(25):
        d = rng.randint(1, 2)
        cons = [[F(rng.randint(-3, 3), rng.choice([1, 2, 3, 4])) for _ in range(d)] for _ in range(rng.randint(1, 2))]
        L = lattice_from_congruences(d, cons)
        from math import lcm

        D = lcm(*(F(x).denominator for c in cons for x in c))
        for num in itertools.product(range(-2 * D, 2 * D + 1), repeat=d):
            a = tuple(F(x, D) for x in num)
            ok = all(sum(c * x for c, x in zip(cc, a)).denominator == 1 for cc in cons)
            assert (a in L) == ok


def test_span_member_dependent():
    gens = [[2, 0], [0, 2], [2, 2]]
    c = span_member(gens, [4, 6])
    assert c is not None
    assert [sum(ci * g[j] for ci, g in zip(c, gens)) for j in range(2)] == [4, 6]
    assert span_member(gens, [1, 0]) is None
    assert span_member([], [0, 0]) == []


def test_lattice_equality_and_hash():
    A = IntLattice([[1, 1], [0, 2]])
    B = IntLattice([[1, -1], [2, 0]])
    assert A == B and hash(A) == hash(B)
    assert A.covolume() == 2


def test_dependent_basis_rejected():
    with pytest.raises(ValueError):
        IntLattice([[1, 2], [2, 4]])
