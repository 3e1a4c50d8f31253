"""Small finite commutative rings with exhaustive enumeration.

Supported presentations: ``Z/n``, ``F_q`` (``q`` a prime power, realized as
``F_p[t]/(g)`` with the first irreducible ``g`` in a fixed search order),
``F_p[t]/(g)`` for any monic ``g``, dual extensions ``A[eps]`` and finite
products.  Elements are plain hashable Python values; the ring object
carries the operations.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import deque
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from binpleth._backend import poly_mulmod
from binpleth.core import PolyParseError, parse_poly

__all__ = [
    "FiniteRing",
    "ZMod",
    "PolyQuotient",
    "DualExtension",
    "ProductRing",
    "RingElem",
    "Integers",
    "RingSpecError",
    "parse_ring",
    "galois_field",
    "irreducible_poly",
    "homs",
    "count_homs",
    "is_hom",
    "factor_prime_power",
]


class RingSpecError(ValueError):
    pass


def factor_prime_power(q: int) -> tuple[int, int] | None:
    """``(p, k)`` with ``q = p**k``, or None."""
    if q < 2:
        return None
    for p in range(2, math.isqrt(q) + 1):
        if q % p == 0:
            k = 0
            while q % p == 0:
                q //= p
                k += 1
            return (p, k) if q == 1 else None
    return q, 1


class FiniteRing:
    """Base class.  Subclasses define the element set and the operations."""

    name: str = "?"

    # operations -----------------------------------------------------------
    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    @property
    def zero(self):
        raise NotImplementedError

    @property
    def one(self):
        raise NotImplementedError

    def _enumerate(self) -> list:
        raise NotImplementedError

    def ring_gens(self) -> list:
        """Elements that generate the ring together with 1.

        The default picks elements greedily until the generated subring is
        everything; presentations override it with their natural generators.
        """
        gens: list = []
        sub = self.subring(gens)
        for x in self.elements():
            if len(sub) == self.size:
                break
            if x not in sub:
                gens.append(x)
                sub = self.subring(gens)
        return gens

    def subring(self, gens: Iterable) -> set:
        """The subring generated by ``gens``."""
        gens = list(gens)
        sub = _subgroup(self, [self.one])
        while True:
            grown = _subgroup(self, list(sub) + [self.mul(x, g) for x in sub for g in gens])
            if len(grown) == len(sub):
                return sub
            sub = grown

    def fmt(self, a) -> str:
        return str(a)

    # derived --------------------------------------------------------------
    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def pow(self, a, e: int):
        out, base = self.one, a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def from_int(self, k: int):
        """Image of the integer ``k`` under the unique map from Z."""
        out, base, neg = self.zero, self.one, k < 0
        k = abs(k)
        while k:
            if k & 1:
                out = self.add(out, base)
            base = self.add(base, base)
            k >>= 1
        return self.neg(out) if neg else out

    def smul(self, k: int, a):
        return self.mul(self.from_int(k), a)

    @cached_property
    def _elements(self) -> tuple:
        return tuple(self._enumerate())

    def elements(self) -> tuple:
        return self._elements

    @property
    def size(self) -> int:
        return len(self._elements)

    @cached_property
    def char(self) -> int:
        n, x = 1, self.one
        while x != self.zero:
            x = self.add(x, self.one)
            n += 1
        return n

    def char_primes(self) -> list[int]:
        n, out = self.char, []
        for p in range(2, n + 1):
            if n % p == 0:
                out.append(p)
                while n % p == 0:
                    n //= p
        return out

    def ideal_multiple(self, k: int) -> frozenset:
        """The set ``kA``."""
        return frozenset(self.smul(k, a) for a in self.elements())

    def elem(self, value) -> "RingElem":
        return RingElem(self, value)

    def __eq__(self, other):
        return isinstance(other, FiniteRing) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} size={self.size}>"

    def __str__(self):
        return self.name


class ZMod(FiniteRing):
    def __init__(self, n: int):
        if n < 2:
            raise RingSpecError("Z/n needs n >= 2")
        self.n = n
        self.name = f"Z/{n}"

    zero = property(lambda self: 0)
    one = property(lambda self: 1)

    def add(self, a, b):
        return (a + b) % self.n

    def neg(self, a):
        return -a % self.n

    def mul(self, a, b):
        return a * b % self.n

    def from_int(self, k):
        return k % self.n

    def pow(self, a, e):
        return pow(a, e, self.n)

    def _enumerate(self):
        return list(range(self.n))

    def ring_gens(self):
        return []


class PolyQuotient(FiniteRing):
    """``F_p[t]/(g)``; elements are coefficient tuples, low degree first."""

    def __init__(self, p: int, g: Sequence[int], name: str | None = None):
        if factor_prime_power(p) != (p, 1):
            raise RingSpecError(f"{p} is not prime")
        g = [c % p for c in g]
        while g and g[-1] == 0:
            g.pop()
        if len(g) < 2 or g[-1] != 1:
            raise RingSpecError("modulus must be monic of positive degree")
        self.p = p
        self.g = tuple(g)
        self.deg = len(g) - 1
        self.name = name or f"F{p}[t]/({_poly_str(self.g, p)})"

    @property
    def zero(self):
        return (0,) * self.deg

    @property
    def one(self):
        return (1,) + (0,) * (self.deg - 1)

    @property
    def t(self):
        return (0, 1) + (0,) * (self.deg - 2) if self.deg > 1 else (-self.g[0] % self.p,)

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple(-x % p for x in a)

    def mul(self, a, b):
        return tuple(poly_mulmod(list(a), list(b), list(self.g), self.p))

    def from_int(self, k):
        return (k % self.p,) + (0,) * (self.deg - 1)

    def _enumerate(self):
        return list(itertools.product(range(self.p), repeat=self.deg))

    def ring_gens(self):
        return [self.t]

    def fmt(self, a):
        return _poly_str(a, self.p)


def _poly_str(coeffs, p) -> str:
    parts = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        if i == 0:
            parts.append(str(c))
        else:
            parts.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(reversed(parts)) if parts else "0"


class DualExtension(FiniteRing):
    """``A[eps]`` with ``eps**2 = 0``; elements are pairs ``(a, b)``."""

    def __init__(self, base: FiniteRing):
        self.base = base
        self.name = f"dual({base.name})"

    @property
    def zero(self):
        return (self.base.zero, self.base.zero)

    @property
    def one(self):
        return (self.base.one, self.base.zero)

    @property
    def eps(self):
        return (self.base.zero, self.base.one)

    def add(self, a, b):
        A = self.base
        return (A.add(a[0], b[0]), A.add(a[1], b[1]))

    def neg(self, a):
        return (self.base.neg(a[0]), self.base.neg(a[1]))

    def mul(self, a, b):
        A = self.base
        return (A.mul(a[0], b[0]), A.add(A.mul(a[0], b[1]), A.mul(a[1], b[0])))

    def from_int(self, k):
        return (self.base.from_int(k), self.base.zero)

    def _enumerate(self):
        E = self.base.elements()
        return [(a, b) for a in E for b in E]

    def ring_gens(self):
        return [(g, self.base.zero) for g in self.base.ring_gens()] + [self.eps]

    def fmt(self, a):
        return f"{self.base.fmt(a[0])}+({self.base.fmt(a[1])})e"


class ProductRing(FiniteRing):
    def __init__(self, factors: Sequence[FiniteRing]):
        if len(factors) < 2:
            raise RingSpecError("a product needs at least two factors")
        self.factors = tuple(factors)
        self.name = "x".join(f.name for f in factors)

    @property
    def zero(self):
        return tuple(f.zero for f in self.factors)

    @property
    def one(self):
        return tuple(f.one for f in self.factors)

    def add(self, a, b):
        return tuple(f.add(x, y) for f, x, y in zip(self.factors, a, b))

    def neg(self, a):
        return tuple(f.neg(x) for f, x in zip(self.factors, a))

    def mul(self, a, b):
        return tuple(f.mul(x, y) for f, x, y in zip(self.factors, a, b))

    def from_int(self, k):
        return tuple(f.from_int(k) for f in self.factors)

    def _enumerate(self):
        return list(itertools.product(*(f.elements() for f in self.factors)))

    def _embed(self, i, x):
        return tuple(x if j == i else f.zero for j, f in enumerate(self.factors))

    def ring_gens(self):
        gens = []
        for i, f in enumerate(self.factors):
            if i < len(self.factors) - 1:
                gens.append(self._embed(i, f.one))
            gens.extend(self._embed(i, g) for g in f.ring_gens())
        return gens

    def fmt(self, a):
        return "(" + ", ".join(f.fmt(x) for f, x in zip(self.factors, a)) + ")"


class Integers:
    """Z with the same operation names as ``FiniteRing`` (no enumeration)."""

    name = "Z"
    zero = 0
    one = 1
    char = 0

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def pow(self, a, e):
        return a**e

    def from_int(self, k):
        return k

    def fmt(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, Integers)

    def __hash__(self):
        return hash("Z")

    def __str__(self):
        return "Z"


class RingElem:
    """Convenience wrapper pairing a value with its ring."""

    __slots__ = ("ring", "value")

    def __init__(self, ring, value):
        self.ring = ring
        self.value = value

    def _v(self, other):
        if isinstance(other, RingElem):
            if other.ring != self.ring:
                raise ValueError("elements of different rings")
            return other.value
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        v = self._v(other)
        return NotImplemented if v is NotImplemented else RingElem(self.ring, self.ring.add(self.value, v))

    __radd__ = __add__

    def __sub__(self, other):
        v = self._v(other)
        return NotImplemented if v is NotImplemented else RingElem(self.ring, self.ring.sub(self.value, v))

    def __rsub__(self, other):
        v = self._v(other)
        return NotImplemented if v is NotImplemented else RingElem(self.ring, self.ring.sub(v, self.value))

    def __neg__(self):
        return RingElem(self.ring, self.ring.neg(self.value))

    def __mul__(self, other):
        v = self._v(other)
        return NotImplemented if v is NotImplemented else RingElem(self.ring, self.ring.mul(self.value, v))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return RingElem(self.ring, self.ring.pow(self.value, e))

    def __eq__(self, other):
        v = self._v(other)
        return NotImplemented if v is NotImplemented else self.value == v

    def __hash__(self):
        return hash((self.ring.name, self.value))

    def __repr__(self):
        return f"RingElem({self.ring.name}, {self.ring.fmt(self.value)})"

    def __str__(self):
        return self.ring.fmt(self.value)


# ---------------------------------------------------------------------------
# fields


def _polymod_p(a: list[int], b: list[int], p: int) -> list[int]:
    a = a[:]
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, x in enumerate(b):
            a[shift + i] = (a[shift + i] - c * x) % p
        while a and a[-1] == 0:
            a.pop()
    return a


@lru_cache(maxsize=None)
def irreducible_poly(p: int, k: int) -> tuple[int, ...]:
    """First monic irreducible of degree ``k`` over F_p (low-first coefficient order)."""
    if k == 1:
        return (0, 1)
    lower = [
        list(c) + [1]
        for d in range(1, k // 2 + 1)
        for c in itertools.product(range(p), repeat=d)
    ]
    # low-degree coefficients vary fastest, so t^3+t+1 precedes t^3+t^2+1
    for rc in itertools.product(range(p), repeat=k):
        c = rc[::-1]
        g = list(c) + [1]
        if c[0] == 0:
            continue
        if all(_polymod_p(g, h, p) for h in lower):
            return tuple(g)
    raise AssertionError("no irreducible polynomial found")


def galois_field(q: int) -> FiniteRing:
    pk = factor_prime_power(q)
    if pk is None:
        raise RingSpecError(f"{q} is not a prime power")
    p, k = pk
    if k == 1:
        R = ZMod(p)
        R.name = f"F{p}"
        return R
    return PolyQuotient(p, irreducible_poly(p, k), name=f"F{q}")


# ---------------------------------------------------------------------------
# spec strings


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _parse_t_poly(text: str, p: int) -> list[int]:
    try:
        f = parse_poly(text.replace("t", "X"))
    except PolyParseError as exc:
        raise RingSpecError(f"bad modulus {text!r}: {exc}") from None
    if set(f.variables) - {"X"}:
        raise RingSpecError(f"modulus {text!r} must be a polynomial in t")
    out = [0] * (f.degree() + 1)
    for (e,), c in f.terms.items():
        if c.denominator != 1:
            raise RingSpecError("modulus coefficients must be integers")
        out[e] = int(c) % p
    return out


def parse_ring(spec: str) -> FiniteRing:
    """Parse ``Z/4``, ``F4``, ``F2[t]/(t^2)``, ``Z/2xZ/9``, ``dual(Z/4)``, ``F4=F2[t]/(...)``."""
    s = spec.replace(" ", "")
    if not s:
        raise RingSpecError("empty ring spec")
    parts = _split_top(s, "x")
    if len(parts) > 1:
        return ProductRing([parse_ring(part) for part in parts])
    if "=" in s:
        label, body = s.split("=", 1)
        R = parse_ring(body)
        if not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", label):
            raise RingSpecError(f"bad ring label {label!r}")
        return R
    m = re.fullmatch(r"dual\((.*)\)", s)
    if m:
        return DualExtension(parse_ring(m[1]))
    m = re.fullmatch(r"Z/(\d+)", s)
    if m:
        return ZMod(int(m[1]))
    m = re.fullmatch(r"F_?(\d+)\[([a-z])\]/\((.*)\)", s)
    if m:
        p = int(m[1])
        return PolyQuotient(p, _parse_t_poly(m[3].replace(m[2], "t"), p))
    m = re.fullmatch(r"F_?(\d+)", s)
    if m:
        return galois_field(int(m[1]))
    raise RingSpecError(f"unrecognised ring spec {spec!r}")


# ---------------------------------------------------------------------------
# homomorphisms


def _additive_words(A: FiniteRing) -> list[tuple[object, tuple[int, ...]]]:
    """Monomials in the ring generators whose Z-span is all of ``A``."""
    gens = A.ring_gens()
    words = [(A.one, ())]
    span = _subgroup(A, [A.one])
    frontier = [(A.one, ())]
    seen = {A.one}
    while len(span) < A.size and frontier:
        nxt = []
        for x, w in frontier:
            for i, g in enumerate(gens):
                y = A.mul(x, g)
                if y in seen:
                    continue
                seen.add(y)
                nxt.append((y, w + (i,)))
                if y not in span:
                    words.append((y, w + (i,)))
                    span = _subgroup(A, [u for u, _ in words])
        frontier = nxt
    if len(span) < A.size:
        raise AssertionError(f"generators of {A.name} do not span it")
    return words


def _subgroup(A: FiniteRing, gens: Iterable) -> set:
    gens = list(gens)
    out = {A.zero}
    todo = deque([A.zero])
    while todo:
        x = todo.popleft()
        for g in gens:
            y = A.add(x, g)
            if y not in out:
                out.add(y)
                todo.append(y)
    return out


def _build(A, B, words, gens, images) -> dict | None:
    """Extend generator images to a hom ``A -> B`` or return None."""
    wimg = []
    for _, w in words:
        v = B.one
        for i in w:
            v = B.mul(v, images[i])
        wimg.append(v)
    phi = {A.zero: B.zero}
    todo = deque([A.zero])
    while todo:
        x = todo.popleft()
        fx = phi[x]
        for (u, _), fu in zip(words, wimg):
            y, fy = A.add(x, u), B.add(fx, fu)
            old = phi.get(y)
            if old is None:
                phi[y] = fy
                todo.append(y)
            elif old != fy:
                return None
    for x, fx in phi.items():
        for g, fg in zip(gens, images):
            if phi[A.mul(x, g)] != B.mul(fx, fg):
                return None
    return phi


def homs(A: FiniteRing, B: FiniteRing) -> list[dict]:
    """All unital ring homomorphisms ``A -> B`` as element maps.

    A candidate fixed by the images of the ring generators is built along
    the additive words; it is a hom iff it is additive along every word and
    multiplicative against every generator (both extend by induction).
    """
    words = _additive_words(A)
    gens = A.ring_gens()
    out = []
    for images in itertools.product(B.elements(), repeat=len(gens)):
        phi = _build(A, B, words, gens, images)
        if phi is not None:
            out.append(phi)
    return out


def count_homs(A: FiniteRing, B: FiniteRing) -> int:
    return len(homs(A, B))


def is_hom(A: FiniteRing, B: FiniteRing, phi: dict) -> bool:
    """Brute-force check over all pairs; used as an oracle in tests."""
    if phi[A.one] != B.one:
        return False
    E = A.elements()
    return all(
        phi[A.add(x, y)] == B.add(phi[x], phi[y]) and phi[A.mul(x, y)] == B.mul(phi[x], phi[y])
        for x in E
        for y in E
    )
