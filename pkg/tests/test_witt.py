import json
import random
from math import comb

import pytest

from binpleth.core import BPoly, MPoly
from binpleth.rings import Integers, ZMod, galois_field, parse_ring
from binpleth.witt import (
    LambdaSeries,
    PadicApprox,
    PrecisionError,
    adams_apply,
    adams_universal,
    bin_fixed_check,
    binomial_series,
    eval_hom,
    witt_points,
    witt_ring_ops,
)

C = BPoly.basis


def test_eval_hom_examples():
    assert eval_hom(PadicApprox(2, 3, 5), C(2)) == 0
    assert eval_hom(PadicApprox(2, 3, 5), BPoly.x()) == 1
    assert eval_hom(PadicApprox(3, 2, 4), C(2)) == 0


def test_eval_hom_precision_error():
    with pytest.raises(PrecisionError):
        eval_hom(PadicApprox(2, 2, 1), C(4))
    with pytest.raises(ValueError):
        PadicApprox(4, 1, 0)
    with pytest.raises(ValueError):
        PadicApprox(2, 2, 4)


def test_precision_independence(rng):
    for p in (2, 3, 5):
        for m in (1, 2, 3):
            q = p**m
            for _ in range(30):
                a = PadicApprox(p, m, rng.randrange(q))
                n = rng.randrange(q)
                t = rng.randint(-50, 50)
                assert eval_hom(a, C(n)) == comb_signed(a.lift(t), n) % p


def comb_signed(x, n):
    # C(x, n) for any integer x
    num = 1
    for i in range(n):
        num *= x - i
    den = 1
    for i in range(2, n + 1):
        den *= i
    return num // den


def test_witt_points_examples():
    W = witt_points(2, 2)
    assert W.vectors == {0: (1, 0, 0, 0), 1: (1, 1, 0, 0), 2: (1, 0, 1, 0), 3: (1, 1, 1, 1)}
    assert W.injective
    assert witt_points(2, 1).injective
    W = witt_points(3, 2)
    assert W.injective and W.image_size == 9


def test_witt_ring_ops_examples():
    one = PadicApprox(2, 2, 1)
    assert witt_ring_ops(one, one, C(2))[0] == 1
    assert witt_ring_ops(PadicApprox(2, 3, 2), PadicApprox(2, 3, 3), C(2))[1] == 1
    a, b = PadicApprox(5, 1, 3), PadicApprox(5, 1, 4)
    assert witt_ring_ops(a, b, BPoly.x()) == ((3 + 4) % 5, (3 * 4) % 5)


def test_witt_ring_ops_exhaustive_small():
    for p, m in ((2, 2), (3, 1), (2, 3)):
        q = p**m
        for x in range(q):
            for y in range(q):
                a, b = PadicApprox(p, m, x), PadicApprox(p, m, y)
                for n in range(q):
                    s, t = witt_ring_ops(a, b, C(n))
                    assert s == eval_hom(a + b, C(n))
                    assert t == eval_hom(a * b, C(n))


def test_adams_k1_identity():
    T = adams_universal(1, 4)
    assert [str(P) for P in T.polys] == ["h1", "h2", "h3", "h4"]


def test_adams_k2_first_coefficient():
    T = adams_universal(2, 1)
    vs = T.variables
    h1, h2 = MPoly.var("h1", vs), MPoly.var("h2", vs)
    assert T.polys[0] == h2 * 2 - h1**2


def test_adams_rank_one_law():
    Z = Integers()
    for k in (2, 3):
        for a in (-2, 3, 5):
            F = LambdaSeries.rank_one(Z, a, 9)
            G = adams_apply(k, F)
            assert list(G.h) == [a ** (k * i) for i in range(1, 9 // k + 1)]


def _numeric_adams_oracle(k, xs, N):
    # psi_k of prod 1/(1 - x_i T) is prod 1/(1 - x_i^k T); complete homogeneous in x^k
    ys = [x**k for x in xs]
    h = [1] + [0] * N
    for y in ys:
        for n in range(1, N + 1):
            h[n] += y * h[n - 1]
    return h[1:]


def test_adams_against_numeric_oracle(rng):
    Z = Integers()
    for k in (2, 3):
        N = 3
        for _ in range(10):
            xs = [rng.randint(-3, 3) for _ in range(k * N)]
            F = LambdaSeries.rank_one(Z, 0, k * N)
            for x in xs:
                F = F + LambdaSeries.rank_one(Z, x, k * N)
            assert list(adams_apply(k, F).h) == _numeric_adams_oracle(k, xs, N)


def test_adams_composition_over_z6(rng):
    R = ZMod(6)
    for _ in range(5):
        F = LambdaSeries(R, [rng.randrange(6) for _ in range(8)])
        assert adams_apply(2, adams_apply(2, F)) == adams_apply(4, F)
        assert adams_apply(1, F) == F


def test_adams_composition_general(rng):
    R = ZMod(12)
    F = LambdaSeries(R, [rng.randrange(12) for _ in range(12)])
    assert adams_apply(2, adams_apply(3, F)) == adams_apply(6, F)
    assert adams_apply(3, adams_apply(2, F)) == adams_apply(6, F)


def test_adams_geometric_fixed_over_f2():
    F2 = galois_field(2)
    F = LambdaSeries(F2, [1] * 8)
    assert list(adams_apply(2, F).h) == [1] * 4


def test_binomial_series_examples():
    a = PadicApprox(2, 3, 1)
    assert list(binomial_series(a, 6).h) == [1] * 6
    assert list(binomial_series(PadicApprox(2, 3, 0), 6).h) == [0] * 6
    assert list(binomial_series(PadicApprox(2, 3, 3), 3).h) == [1, 0, 0]
    with pytest.raises(PrecisionError):
        binomial_series(PadicApprox(2, 2, 1), 4)


def test_binomial_series_is_power_of_geometric():
    for p, m in ((2, 3), (3, 2)):
        q = p**m
        K = galois_field(p)
        geo = LambdaSeries(K, [1] * (q - 1))
        acc = LambdaSeries.one(K, q - 1)
        for alpha in range(q):
            assert binomial_series(PadicApprox(p, m, alpha), q - 1) == acc
            acc = acc + geo


def test_bin_fixed_check_examples():
    for p, m, top in ((2, 3, 8), (3, 2, 9)):
        for alpha in range(top):
            assert bin_fixed_check(binomial_series(PadicApprox(p, m, alpha), p**m - 1), 3)
    F = LambdaSeries(ZMod(4), [1, 0])
    assert adams_apply(2, F).h == (3,)
    assert not bin_fixed_check(F, 2)
    assert bin_fixed_check(LambdaSeries.one(ZMod(4), 6), 5)


def test_count_agreement():
    for p, m in ((2, 2), (3, 2), (2, 3)):
        q = p**m
        series = {binomial_series(PadicApprox(p, m, a), q - 1) for a in range(q)}
        assert len(series) == q == witt_points(p, m).image_size


def test_series_json_round_trip():
    for R, h in ((ZMod(6), [1, 5, 0]), (parse_ring("F4"), None), (Integers(), [3, -7])):
        if h is None:
            h = list(R.elements())[:3]
        F = LambdaSeries(R, h)
        data = json.loads(F.to_json())
        assert set(data) == {"ring", "trunc", "h"} and data["trunc"] == len(h)
        assert LambdaSeries.from_json(F.to_json()) == F


def test_series_json_rejects_bad():
    with pytest.raises(ValueError):
        LambdaSeries.from_json('{"ring": "Z/4", "trunc": 2, "h": ["1"]}')
    with pytest.raises(ValueError):
        LambdaSeries.from_json('{"ring": "Z/4", "trunc": 1, "h": ["9"]}')


def test_adams_cache_concurrent():
    from concurrent.futures import ThreadPoolExecutor

    from binpleth import witt

    witt._ADAMS_CACHE.pop((3, 4), None)
    with ThreadPoolExecutor(8) as ex:
        tables = list(ex.map(lambda _: adams_universal(3, 4), range(16)))
    assert all(t is tables[0] for t in tables)


def test_mod_p_tables_match_exact_co_operations():
    from binpleth.biring import coadd, comul
    from binpleth.witt import _basis_terms

    for n in range(15):
        for p in (2, 3, 5):
            plus, times = _basis_terms(n, p)
            for got, T in ((plus, coadd(C(n))), (times, comul(C(n)))):
                want = sorted((i, j, int(c) % p) for (i, j), c in T.items() if int(c) % p)
                assert sorted(got) == want
