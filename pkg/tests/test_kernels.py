import random
from fractions import Fraction
from math import comb

import pytest

from binpleth import _backend, _pykernels

backends = [pytest.param(_pykernels, id="python")]
try:
    from binpleth import _ckernels

    backends.append(pytest.param(_ckernels, id="cython"))
except ImportError:
    pass


@pytest.fixture(params=backends)
def K(request):
    return request.param


def test_backend_selected():
    assert _backend.BACKEND in ("cython", "python")


def test_forward_differences(K):
    assert K.forward_differences([0, 1, 4]) == [0, 1, 2]
    assert K.forward_differences([0, 1, 8, 27]) == [0, 1, 6, 6]
    assert K.forward_differences([]) == []
    vals = [Fraction(k * k, 2) for k in range(4)]
    assert K.forward_differences(vals) == [0, Fraction(1, 2), 1, 0]


def test_forward_differences_2d(K):
    grid = [[comb(i + j, 2) for j in range(3)] for i in range(3)]
    assert K.forward_differences_2d(grid) == [[0, 0, 1], [0, 1, 0], [1, 0, 0]]


def test_binom_mod_p_matches_math(K):
    for p in (2, 3, 5, 7):
        for a in range(60):
            for n in range(12):
                assert K.binom_mod_p(a, n, p) == comb(a, n) % p
    assert K.binom_row_mod_p(5, 4, 2) == [comb(5, n) % 2 for n in range(5)]


def test_bilinear_mod(K):
    terms = [(0, 2, 1), (1, 1, 1), (2, 0, 1)]
    assert K.bilinear_mod(terms, [1, 1, 0], [1, 1, 0], 2) == 1


def test_poly_mulmod(K):
    g = [1, 1, 1]  # t^2 + t + 1 over F2
    assert tuple(K.poly_mulmod([0, 1], [0, 1], g, 2)) == (1, 1)
    assert tuple(K.poly_mulmod([1, 1], [0, 1], g, 2)) == (1, 0)


def test_backends_agree():
    if len(backends) < 2:
        pytest.skip("compiled kernels not built")
    C, P = _ckernels, _pykernels
    rng = random.Random(3)
    for _ in range(200):
        p = rng.choice([2, 3, 5, 7, 11])
        a, n = rng.randrange(500), rng.randrange(40)
        assert C.binom_mod_p(a, n, p) == P.binom_mod_p(a, n, p)
        vals = [rng.randint(-50, 50) for _ in range(rng.randrange(8))]
        assert C.forward_differences(vals) == P.forward_differences(vals)
        d = rng.randint(1, 4)
        g = [rng.randrange(p) for _ in range(d)] + [1]
        a1 = [rng.randrange(p) for _ in range(d)]
        b1 = [rng.randrange(p) for _ in range(d)]
        assert tuple(C.poly_mulmod(a1, b1, g, p)) == tuple(P.poly_mulmod(a1, b1, g, p))


def test_compiled_rejects_big_modulus():
    if len(backends) < 2:
        pytest.skip("compiled kernels not built")
    with pytest.raises(OverflowError):
        _ckernels.binom_mod_p(3, 1, 2**40 + 15)
