"""Witt points of Int(Z) over F_p and the Adams-operation picture of Bin.

A ring map ``Int(Z) -> F_p`` is determined by the residue of a p-adic
integer ``alpha``: ``f -> f(alpha) mod p``.  When ``deg f < p^m`` the value
only depends on ``alpha mod p^m`` (Lucas), which is what ``PadicApprox``
stores.

Series in ``1 + T A[[T]]`` use the complete-homogeneous convention
``F = prod (1 - x_i T)^(-1)``, so the rank-one element is ``1/(1 - aT)``.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from binpleth._backend import bilinear_mod, binom_mod_p, binom_row_mod_p, forward_differences_2d
from binpleth.core import BPoly, MPoly
from binpleth.ivp import primes_upto
from binpleth.rings import Integers, galois_field, parse_ring

__all__ = [
    "PrecisionError",
    "PadicApprox",
    "eval_hom",
    "witt_points",
    "WittPoints",
    "witt_ring_ops",
    "AdamsTable",
    "adams_universal",
    "LambdaSeries",
    "adams_apply",
    "binomial_series",
    "bin_fixed_check",
]


class PrecisionError(ValueError):
    """The requested value is not determined at the stored precision."""


def _is_prime(p: int) -> bool:
    return p >= 2 and p in primes_upto(p)


@dataclass(frozen=True)
class PadicApprox:
    p: int
    m: int
    residue: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.m < 1:
            raise ValueError("precision must be at least 1")
        if not 0 <= self.residue < self.p**self.m:
            raise ValueError("residue out of range")

    @classmethod
    def of(cls, p: int, m: int, value: int) -> "PadicApprox":
        return cls(p, m, value % p**m)

    @property
    def modulus(self) -> int:
        return self.p**self.m

    def lift(self, t: int) -> int:
        """An integer representative ``residue + t p^m``."""
        return self.residue + t * self.modulus

    def _check(self, other: "PadicApprox"):
        if (self.p, self.m) != (other.p, other.m):
            raise ValueError("mismatched p or precision")

    def __add__(self, other: "PadicApprox") -> "PadicApprox":
        self._check(other)
        return PadicApprox.of(self.p, self.m, self.residue + other.residue)

    def __mul__(self, other: "PadicApprox") -> "PadicApprox":
        self._check(other)
        return PadicApprox.of(self.p, self.m, self.residue * other.residue)


def _integral_coeffs(f: BPoly) -> list[int]:
    if not f.has_integral_coeffs():
        raise ValueError(f"{f} is not in Int(Z)")
    return [int(c) for c in f.coeffs]


def _require(alpha: PadicApprox, degree: int):
    if degree >= alpha.modulus:
        raise PrecisionError(
            f"degree {degree} needs precision m with {alpha.p}^m > {degree}; have m={alpha.m}"
        )


def eval_hom(alpha: PadicApprox, f: BPoly) -> int:
    """``f(alpha) mod p`` for ``f`` in Int(Z) with ``deg f < p^m``."""
    a = _integral_coeffs(f)
    _require(alpha, f.degree())
    if not a:
        return 0
    row = binom_row_mod_p(alpha.residue, len(a) - 1, alpha.p)
    return sum(x * y for x, y in zip(a, row)) % alpha.p


@dataclass(frozen=True)
class WittPoints:
    p: int
    m: int
    vectors: dict
    injective: bool

    @property
    def image_size(self) -> int:
        return len(set(self.vectors.values()))


def witt_points(p: int, m: int) -> WittPoints:
    """The vectors ``(C(alpha, n) mod p)_{n < p^m}`` for every residue ``alpha``."""
    q = p**m
    vecs = {a: tuple(binom_row_mod_p(a, q - 1, p)) for a in range(q)}
    return WittPoints(p, m, vecs, len(set(vecs.values())) == q)


def witt_ring_ops(alpha: PadicApprox, beta: PadicApprox, f: BPoly) -> tuple[int, int]:
    """Sum and product of Witt points, computed through coaddition and comultiplication."""
    alpha._check(beta)
    _integral_coeffs(f)
    d = f.degree()
    _require(alpha, d)
    if d < 0:
        return 0, 0
    p = alpha.p
    u = binom_row_mod_p(alpha.residue, d, p)
    v = binom_row_mod_p(beta.residue, d, p)
    s = t = 0
    # f = sum a_n C(X,n), and both co-operations are linear
    for n, a in enumerate(_integral_coeffs(f)):
        if a % p:
            plus, times = _basis_terms(n, p)
            s += a * bilinear_mod(plus, u, v, p)
            t += a * bilinear_mod(times, u, v, p)
    return s % p, t % p


@lru_cache(maxsize=None)
def _basis_terms(n: int, p: int) -> tuple[list, list]:
    """Coaddition and comultiplication of ``C(X,n)`` as ``(i, j, c mod p)`` lists.

    The tensor coefficients are integers obtained from the value grid by
    integer forward differences, so the whole computation can run mod p.
    """
    out = []
    for combine in (lambda i, j: i + j, lambda i, j: i * j):
        grid = [[binom_mod_p(combine(i, j), n, p) for j in range(n + 1)] for i in range(n + 1)]
        diffs = forward_differences_2d(grid)
        out.append([(i, j, c % p) for i, row in enumerate(diffs) for j, c in enumerate(row) if c % p])
    return out[0], out[1]


# ---------------------------------------------------------------------------
# Adams operations


@dataclass(frozen=True)
class AdamsTable:
    """``polys[n-1]`` gives coefficient ``n`` of ``psi_k F`` in ``h_1 .. h_{kN}``."""

    k: int
    N: int
    polys: tuple[MPoly, ...]

    @property
    def variables(self) -> tuple[str, ...]:
        return _hvars(self.k * self.N)


def _hvars(n: int) -> tuple[str, ...]:
    return tuple(f"h{i}" for i in range(1, n + 1))


_ADAMS_CACHE: dict[tuple[int, int], AdamsTable] = {}
_ADAMS_LOCK = threading.Lock()


def _power_sums(M: int) -> list[MPoly]:
    """``p_1 .. p_M`` in terms of ``h_1 .. h_M`` via ``n h_n = sum p_i h_{n-i}``."""
    vs = _hvars(M)
    h = [MPoly.const(1, vs)] + [MPoly.var(v, vs) for v in vs]
    ps: list[MPoly] = [MPoly.const(0, vs)]
    for n in range(1, M + 1):
        acc = h[n] * n
        for i in range(1, n):
            acc = acc - ps[i] * h[n - i]
        ps.append(acc)
    return ps


def adams_universal(k: int, N: int) -> AdamsTable:
    """Integral polynomials for ``psi_k`` up to truncation ``N``.

    With power sums ``p_n`` written in the ``h``'s, ``psi_k`` sends ``p_n``
    to ``p_{kn}``, and Newton's identity rebuilds ``h'_n`` from those.
    Tables are cached; population is serialized by a lock.
    """
    if k < 1 or N < 1:
        raise ValueError("k and N must be positive")
    key = (k, N)
    table = _ADAMS_CACHE.get(key)
    if table is not None:
        return table
    with _ADAMS_LOCK:
        table = _ADAMS_CACHE.get(key)
        if table is None:
            table = _build_adams(k, N)
            _ADAMS_CACHE[key] = table
    return table


def _build_adams(k: int, N: int) -> AdamsTable:
    M = k * N
    vs = _hvars(M)
    if k == 1:
        return AdamsTable(1, N, tuple(MPoly.var(v, vs) for v in vs))
    ps = _power_sums(M)
    hp = [MPoly.const(1, vs)]
    for n in range(1, N + 1):
        acc = MPoly.const(0, vs)
        for i in range(1, n + 1):
            acc = acc + ps[k * i] * hp[n - i]
        hn = acc * Fraction(1, n)
        if any(c.denominator != 1 for c in hn.terms.values()):
            raise AssertionError("Adams polynomial with non-integral coefficient")
        hp.append(hn)
    return AdamsTable(k, N, tuple(hp[1:]))


def _eval_in_ring(poly: MPoly, ring, values: Sequence) -> object:
    total = ring.zero
    pw_cache: dict = {}
    for exps, c in poly.terms.items():
        term = ring.from_int(int(c))
        for i, e in enumerate(exps):
            if e:
                key = (i, e)
                if key not in pw_cache:
                    pw_cache[key] = ring.pow(values[i], e)
                term = ring.mul(term, pw_cache[key])
        total = ring.add(total, term)
    return total


def _encode(v):
    if isinstance(v, tuple):
        return [_encode(x) for x in v]
    return str(v)


def _decode(v):
    if isinstance(v, list):
        return tuple(_decode(x) for x in v)
    return int(v)


class LambdaSeries:
    """``1 + h_1 T + ... + h_N T^N`` with coefficients in a ring."""

    __slots__ = ("ring", "h")

    def __init__(self, ring, h: Sequence):
        self.ring = ring
        self.h = tuple(h)

    @property
    def trunc(self) -> int:
        return len(self.h)

    @classmethod
    def one(cls, ring, N: int) -> "LambdaSeries":
        return cls(ring, [ring.zero] * N)

    @classmethod
    def rank_one(cls, ring, a, N: int) -> "LambdaSeries":
        """``1 / (1 - aT)``."""
        return cls(ring, [ring.pow(a, i) for i in range(1, N + 1)])

    def coeffs(self) -> list:
        return [self.ring.one] + list(self.h)

    def truncate(self, N: int) -> "LambdaSeries":
        return LambdaSeries(self.ring, self.h[:N])

    def __add__(self, other: "LambdaSeries") -> "LambdaSeries":
        """Lambda-ring addition, which is multiplication of series."""
        if other.ring != self.ring:
            raise ValueError("series over different rings")
        R = self.ring
        N = min(self.trunc, other.trunc)
        a, b = self.coeffs(), other.coeffs()
        out = []
        for n in range(1, N + 1):
            s = R.zero
            for i in range(n + 1):
                s = R.add(s, R.mul(a[i], b[n - i]))
            out.append(s)
        return LambdaSeries(R, out)

    def __eq__(self, other):
        if not isinstance(other, LambdaSeries):
            return NotImplemented
        return self.ring == other.ring and self.h == other.h

    def __hash__(self):
        return hash((str(self.ring), self.h))

    def agrees(self, other: "LambdaSeries") -> bool:
        """Equal up to the smaller truncation."""
        N = min(self.trunc, other.trunc)
        return self.ring == other.ring and self.h[:N] == other.h[:N]

    def to_json(self) -> str:
        return json.dumps({"ring": str(self.ring), "trunc": self.trunc, "h": [_encode(x) for x in self.h]})

    @classmethod
    def from_json(cls, text: str) -> "LambdaSeries":
        data = json.loads(text)
        ring = Integers() if data["ring"] == "Z" else parse_ring(data["ring"])
        h = [_decode(x) for x in data["h"]]
        if len(h) != int(data["trunc"]):
            raise ValueError("trunc does not match the coefficient list")
        if not isinstance(ring, Integers):
            elems = set(ring.elements())
            if any(x not in elems for x in h):
                raise ValueError("coefficient outside the ring")
        return cls(ring, h)

    def __repr__(self):
        return f"LambdaSeries({self.ring}, [{', '.join(self.ring.fmt(x) for x in self.h)}])"

    def __str__(self):
        parts = ["1"]
        for n, x in enumerate(self.h, start=1):
            if x != self.ring.zero:
                parts.append(f"({self.ring.fmt(x)})T^{n}")
        return " + ".join(parts) + f" + O(T^{self.trunc + 1})"


def adams_apply(k: int, F: LambdaSeries) -> LambdaSeries:
    """``psi_k F``, truncated at ``floor(N / k)``."""
    M = F.trunc // k
    if M == 0:
        return LambdaSeries(F.ring, [])
    table = adams_universal(k, M)
    vals = list(F.h[: k * M])
    return LambdaSeries(F.ring, [_eval_in_ring(P, F.ring, vals) for P in table.polys])


def binomial_series(alpha: PadicApprox, N: int) -> LambdaSeries:
    """``(1 - T)^(-alpha)`` over F_p: ``h_n = C(alpha + n - 1, n) mod p``."""
    if N >= alpha.modulus:
        raise PrecisionError(f"truncation {N} needs {alpha.p}^m > {N}; have m={alpha.m}")
    p = alpha.p
    out = [binom_mod_p(alpha.residue + n - 1, n, p) for n in range(1, N + 1)]
    return LambdaSeries(galois_field(p), out)


def bin_fixed_check(F: LambdaSeries, K: int) -> bool:
    """Is ``F`` fixed by ``psi_2 .. psi_K`` at the available precision?"""
    for k in range(2, K + 1):
        G = adams_apply(k, F)
        if G.h != F.h[: G.trunc]:
            return False
    return True
