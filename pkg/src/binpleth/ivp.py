"""Integer-valued polynomial rings over Z and Z_(p), decided gradewise.

Every supported family is cut out, in degree <= d, by finitely many
Z-linear congruences on the binomial coordinates.  ``graded_basis`` builds
those congruences and hands them to ``lattice_from_congruences``;
``membership`` decides a single polynomial by a separate, direct route.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from binpleth.core import BPoly, DualElem, derivative, evaluate, fdiff, from_binomial, is_int_valued
from binpleth.intlattice import IntLattice, lattice_from_congruences

__all__ = [
    "RingFamily",
    "parse_family",
    "GradedBasis",
    "membership",
    "graded_basis",
    "c_n",
    "local_basis",
    "dual_decompose",
    "dual_decompose_direct",
    "dual_decompose_split",
    "chain_witness",
    "inf_equality_check",
    "primes_upto",
    "vp",
]

INF = None  # order parameter meaning "all orders"


def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i in range(n + 1) if sieve[i]]


def vp(x, p: int) -> int | float:
    """p-adic valuation of a rational; ``inf`` for zero."""
    x = Fraction(x)
    if x == 0:
        return math.inf
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % q for q in range(2, math.isqrt(p) + 1))


@dataclass(frozen=True)
class RingFamily:
    """One of the supported families.

    kind is ``int``, ``int_local`` (param p), ``int_over`` (param m, the ring
    Int(Z) meet Z[1/m][X]), ``dint`` or ``fdint`` (param r, ``None`` for
    infinity).
    """

    kind: str
    param: int | None = None

    def __post_init__(self):
        if self.kind not in ("int", "int_local", "int_over", "dint", "fdint"):
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.kind == "int_local" and not _is_prime(self.param or 0):
            raise ValueError("localized family needs a prime")
        if self.kind == "int_over" and (self.param is None or self.param < 1):
            raise ValueError("overring parameter must be a positive integer")
        if self.kind in ("dint", "fdint") and self.param is not None and self.param < 0:
            raise ValueError("order must be nonnegative")

    def order(self, d: int) -> int:
        """Derivative/difference order actually used at grade ``d``."""
        return d if self.param is None else min(self.param, d)

    def __str__(self):
        if self.kind == "int":
            return "int"
        if self.kind == "int_local":
            return f"int@p={self.param}"
        if self.kind == "int_over":
            return f"int[1/{self.param}]"
        return f"{self.kind}:{'inf' if self.param is None else self.param}"


_FAMILY_RE = [
    (re.compile(r"int$"), lambda m: RingFamily("int")),
    (re.compile(r"int@p=(\d+)$"), lambda m: RingFamily("int_local", int(m[1]))),
    (re.compile(r"int\[1/(\d+)\]$"), lambda m: RingFamily("int_over", int(m[1]))),
    (re.compile(r"(f?dint):(inf|\d+)$"), lambda m: RingFamily(m[1], None if m[2] == "inf" else int(m[2]))),
]


def parse_family(text: str) -> RingFamily:
    s = text.strip().lower()
    for rx, build in _FAMILY_RE:
        m = rx.match(s)
        if m:
            return build(m)
    raise ValueError(f"unrecognised family {text!r}")


def _family(f) -> RingFamily:
    return f if isinstance(f, RingFamily) else parse_family(f)


# ---------------------------------------------------------------------------
# membership, direct route


def _smooth_part(n: int, m: int) -> int:
    """Largest divisor of ``n`` built from primes dividing ``m``."""
    out = 1
    for p in primes_upto(m):
        if m % p == 0:
            while n % p == 0:
                n //= p
                out *= p
    return out


def _span_basis(polys: list[BPoly], d: int) -> list[BPoly]:
    vecs = [[p.coeff(n) for n in range(d + 1)] for p in polys if not p.is_zero()]
    if not vecs:
        return []
    return [BPoly(r) for r in IntLattice.from_generators(vecs, d + 1).basis_rows()]


def _local_probe(f: BPoly, p: int) -> bool:
    d = max(f.degree(), 0)
    M = vp(math.factorial(d), p) + 1
    return all(vp(f.value_at_int(a), p) >= 0 for a in range(p**M))


def membership(f: BPoly, family) -> bool:
    """Exact decision of ``f`` in the family."""
    fam = _family(family)
    if fam.kind == "int":
        return is_int_valued(f)
    if fam.kind == "int_local":
        return _local_probe(f, fam.param)
    if fam.kind == "int_over":
        if not is_int_valued(f):
            return False
        allowed = {p for p in primes_upto(fam.param) if fam.param % p == 0}
        for c in from_binomial(f).terms.values():
            den = c.denominator
            for p in allowed:
                while den % p == 0:
                    den //= p
            if den != 1:
                return False
        return True
    d = f.degree()
    if d < 0:
        return True
    r = fam.order(d)
    if fam.kind == "dint":
        return all(is_int_valued(derivative(f, j)) for j in range(r + 1))
    # fdint: the Z-span of all s-fold differences, with shifts 0..d, is
    # reduced to a basis at each level; arbitrary integer shifts land in it.
    level = [f]
    for s in range(r + 1):
        if not all(is_int_valued(g) for g in level):
            return False
        if s == r:
            break
        level = _span_basis([fdiff(g, h) for g in level for h in range(d + 1)], d)
        if not level:
            break
    return True


# ---------------------------------------------------------------------------
# graded bases


@lru_cache(maxsize=None)
def _op_column(n: int, op: str, h: int) -> tuple[Fraction, ...]:
    g = derivative(BPoly.basis(n), 1) if op == "d" else fdiff(BPoly.basis(n), h)
    return g.coeffs


def _pullback(phi: list[Fraction], op: str, h: int, d: int) -> list[Fraction]:
    """The functional ``a -> phi(T a)`` where ``T`` is the operator on coordinates."""
    out = []
    for n in range(d + 1):
        col = _op_column(n, op, h)
        out.append(sum((phi[m] * c for m, c in enumerate(col)), Fraction(0)))
    return out


def _reduce(funcs: list[list[Fraction]], d: int) -> list[list[Fraction]]:
    funcs = [f for f in funcs if any(f)]
    if not funcs:
        return []
    return IntLattice.from_generators(funcs, d + 1).basis_rows()


def _constraints(fam: RingFamily, d: int) -> list[list[Fraction]]:
    unit = [[Fraction(int(i == j)) for j in range(d + 1)] for i in range(d + 1)]
    if fam.kind in ("int", "int_local"):
        return unit
    if fam.kind == "int_over":
        u = _smooth_part(math.factorial(d), fam.param)
        # monomial coefficient k of C(X,n), scaled by u
        mono = [from_binomial(BPoly.basis(n)).terms for n in range(d + 1)]
        rows = [[u * mono[n].get((k,), Fraction(0)) for n in range(d + 1)] for k in range(d + 1)]
        return unit + rows
    op = "d" if fam.kind == "dint" else "f"
    shifts = [0] if op == "d" else list(range(d + 1))
    out = list(unit)
    level = unit
    for _ in range(fam.order(d)):
        level = _reduce([_pullback(phi, op, h, d) for phi in level for h in shifts], d)
        if not level:
            break
        out.extend(level)
    return out


@dataclass(frozen=True)
class GradedBasis:
    family: RingFamily
    degree: int
    lattice: IntLattice
    diagonal: tuple[Fraction, ...]
    elements: tuple[BPoly, ...]

    def contains(self, f: BPoly) -> bool:
        if f.degree() > self.degree:
            raise ValueError("polynomial exceeds the grade")
        return [f.coeff(n) for n in range(self.degree + 1)] in self.lattice


def graded_basis(family, d: int) -> GradedBasis:
    """Degree-<=d members of the family, as a lattice in binomial coordinates.

    For ``int@p`` the lattice is that of Int(Z); its Z_(p)-span is the
    degree-<=d part of Int(Z_(p)).
    """
    fam = _family(family)
    if d < 0:
        raise ValueError("degree must be nonnegative")
    L = lattice_from_congruences(d + 1, _constraints(fam, d))
    # a triangular basis comes from the HNF with degrees in descending order
    rev = IntLattice([list(reversed(r)) for r in L.basis_rows()], d + 1)
    rows = [list(reversed(r)) for r in rev.canonical_rows()]
    elements = tuple(sorted((BPoly(r) for r in rows), key=BPoly.degree))
    diagonal = tuple(e.coeff(n) for n, e in enumerate(elements))
    return GradedBasis(fam, d, L, diagonal, elements)


def c_n(n: int) -> int:
    """``prod over primes p <= n of p ** floor(n / p)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return math.prod(p ** (n // p) for p in primes_upto(n))


def local_basis(p: int, n: int) -> BPoly:
    """``X(X-1)...(X-n+1) / p^{v_p(n!)}``."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n < 0:
        raise ValueError("n must be nonnegative")
    fact = math.factorial(n)
    return BPoly.basis(n) * Fraction(fact, p ** vp(fact, p))


# ---------------------------------------------------------------------------
# dual numbers


def dual_decompose_direct(f: BPoly, g: BPoly, r: int) -> bool:
    """Evaluate ``F = f + g eps`` and its first ``r`` derivatives on Z[eps].

    ``F^(j)(a + b eps)`` has eps-part linear in ``b`` and both parts
    polynomial in ``a``, so ``b in {0, 1}`` and ``a`` over ``deg+1``
    consecutive integers decide integrality.
    """
    deg = max(f.degree(), g.degree(), 0)
    for j in range(r + 1):
        fj, gj = derivative(f, j), derivative(g, j)
        for a in range(deg + 2):
            for b in (0, 1):
                x = DualElem(a, b)
                v = evaluate(fj, x)
                w = evaluate(gj, x)
                if not isinstance(v, DualElem):
                    v = DualElem(v, 0)
                if not isinstance(w, DualElem):
                    w = DualElem(w, 0)
                val = v + DualElem(0, w.base)
                if Fraction(val.base).denominator != 1 or Fraction(val.eps).denominator != 1:
                    return False
    return True


def dual_decompose_split(f: BPoly, g: BPoly, r: int) -> bool:
    return membership(f, RingFamily("dint", r + 1)) and membership(g, RingFamily("dint", r))


def dual_decompose(f: BPoly, g: BPoly, r: int) -> bool:
    """Is ``f + g eps`` in Int^(r)(Z[eps])?  Both routes are run and must agree."""
    a = dual_decompose_direct(f, g, r)
    b = dual_decompose_split(f, g, r)
    if a != b:
        raise AssertionError(f"dual decision routes disagree on f={f}, g={g}, r={r}")
    return a


# ---------------------------------------------------------------------------
# strict chains


def chain_witness(r: int, dmax: int = 10, kind: str = "dint") -> tuple[int, BPoly] | None:
    """Least grade where order ``r`` and ``r+1`` differ, with a member of the gap."""
    if kind not in ("dint", "fdint"):
        raise ValueError("kind must be dint or fdint")
    for d in range(dmax + 1):
        big = graded_basis(RingFamily(kind, r), d)
        small = graded_basis(RingFamily(kind, r + 1), d)
        if big.lattice == small.lattice:
            continue
        for e in big.elements:
            if not small.contains(e):
                return d, e
    return None


def inf_equality_check(d: int) -> bool:
    a = graded_basis(RingFamily("dint", INF), d)
    b = graded_basis(RingFamily("fdint", INF), d)
    return a.lattice == b.lattice and a.diagonal == b.diagonal
