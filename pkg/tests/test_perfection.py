import pytest

from binpleth.perfection import (
    CharacteristicError,
    adjunction_check,
    closure_step,
    frobenius,
    frobenius_is_hom,
    is_perfect,
    perfect_closure_l,
    perfection_r,
    perfection_sizes,
)
from binpleth.reflect import SizeLimitError
from binpleth.rings import galois_field, is_hom, parse_ring

FIELDS = ["F2", "F3", "F4", "F5", "F7", "F8", "F9", "F16"]
TRUNC = [f"F{p}[t]/(t^{k})" for p in (2, 3) for k in (2, 3, 4) if p**k <= 81]
CORPUS = FIELDS + TRUNC + ["F2xF4", "dual(F2)", "dual(F4)"]


def _brute_perfect(A):
    p = A.char
    return sorted(A.pow(a, p) for a in A.elements()) == sorted(A.elements())


@pytest.mark.parametrize("spec", CORPUS)
def test_is_perfect_and_frobenius(spec):
    A = parse_ring(spec)
    assert frobenius_is_hom(A)
    assert is_perfect(A) == _brute_perfect(A)
    assert is_perfect(A) == (spec in FIELDS or spec == "F2xF4")


def test_wrong_characteristic():
    with pytest.raises(CharacteristicError):
        is_perfect(parse_ring("Z/6"))
    with pytest.raises(CharacteristicError):
        is_perfect(parse_ring("Z/4"))


def test_perfection_examples():
    assert perfection_r(galois_field(4), 3).size == 4
    assert perfection_r(parse_ring("F2[t]/(t^2)"), 3).size == 2
    for m in range(1, 5):
        assert perfection_r(galois_field(3), m).size == 3


def _chains_brute(A, m):
    # grow chains forwards by choosing p-th roots
    p = A.char
    roots = {}
    for a in A.elements():
        roots.setdefault(A.pow(a, p), []).append(a)
    chains = [(a,) for a in A.elements()]
    for _ in range(m - 1):
        chains = [c + (r,) for c in chains for r in roots.get(c[-1], [])]
    return set(chains)


@pytest.mark.parametrize("spec", ["F4", "F2[t]/(t^2)", "F3[t]/(t^2)", "F2[t]/(t^3)"])
def test_perfection_sizes_stabilise(spec):
    A = parse_ring(spec)
    sizes = perfection_sizes(A, 6)
    assert sizes == sorted(sizes, reverse=True)
    P = perfection_r(A)
    assert is_perfect(P)
    # the stabilised chains are exactly the infinite-chain truncations:
    # a brute-force chain whose last entry has arbitrarily long p-th root towers
    m = P.m
    deep = _chains_brute(A, m + 4)
    assert set(P.elements()) == {c[:m] for c in deep}


@pytest.mark.parametrize("spec", FIELDS + ["F2xF4"])
def test_projection_is_iso_for_perfect(spec):
    A = parse_ring(spec)
    P = perfection_r(A)
    proj = {a: P.project(a) for a in P.elements()}
    assert sorted(proj.values()) == sorted(A.elements())
    assert is_hom(P, A, proj)


def test_not_strongly_idempotent_evidence():
    A = parse_ring("F2[t]/(t^2)")
    assert not is_perfect(A)
    assert perfection_r(A).size < A.size


def test_perfect_closure_examples():
    R = perfect_closure_l(2, 2, 1)
    assert R.name == "F2[u]/(u^4)" and R.size == 16
    assert perfect_closure_l(2, 2, 0).name == "F2[x]/(x^2)"
    assert perfect_closure_l(1, 3, 0).size == 3


@pytest.mark.parametrize("n, p, k", [(1, 2, 0), (1, 2, 1), (2, 2, 0), (2, 2, 1), (3, 2, 0), (3, 2, 1), (2, 3, 0)])
def test_closure_steps(n, p, k):
    S, T = perfect_closure_l(n, p, k), perfect_closure_l(n, p, k + 1)
    inc = closure_step(n, p, k)
    assert is_hom(S, T, inc)
    assert len(set(inc.values())) == S.size
    # every element of the smaller stage has a p-th root in the next
    frob = set(frobenius(T).values())
    assert set(inc.values()) <= frob


def test_adjunction_examples():
    F4, F2 = galois_field(4), galois_field(2)
    r = adjunction_check(F4, F4)
    assert r.ok and (r.homs_into_perfection, r.homs_into_A) == (2, 2)
    for spec in ["F2", "F4", "F2[t]/(t^2)", "F2[t]/(t^3)"]:
        r = adjunction_check(F2, parse_ring(spec))
        assert r.ok and r.homs_into_A == 1
    r = adjunction_check(F4, parse_ring("F2[t]/(t^2)"))
    assert r.ok and (r.homs_into_perfection, r.homs_into_A) == (0, 0)


def test_adjunction_small_corpus():
    rings = [parse_ring(s) for s in ["F2", "F3", "F4", "F8", "F9", "F16", "F2[t]/(t^2)", "F2[t]/(t^3)",
                                     "F2[t]/(t^4)", "F3[t]/(t^2)", "F2xF2", "F2xF4", "dual(F2)", "dual(F4)"]]
    for B in rings:
        if not is_perfect(B):
            continue
        for A in rings:
            if A.char == B.char and A.size <= 16 and B.size <= 16:
                assert adjunction_check(B, A).ok, (B, A)


def test_adjunction_errors():
    with pytest.raises(ValueError):
        adjunction_check(parse_ring("F2[t]/(t^2)"), galois_field(2))
    with pytest.raises(CharacteristicError):
        adjunction_check(galois_field(3), galois_field(2))
    with pytest.raises(SizeLimitError):
        adjunction_check(galois_field(2), parse_ring("F2[t]/(t^7)"))
