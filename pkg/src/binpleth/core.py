"""Exact polynomial arithmetic over Q in the monomial and binomial bases.

Two value types live here:

``MPoly``
    a multivariate polynomial stored as ``{exponent tuple: Fraction}``.
``BPoly``
    a univariate polynomial stored by its coordinates on the basis
    ``C(X, 0), C(X, 1), ...``.  A ``BPoly`` is integer valued exactly when
    every coordinate is an integer.

Both are immutable.  ``DualElem`` models ``a + b*eps`` with ``eps**2 == 0``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache, reduce
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from binpleth._backend import forward_differences

Rat = Fraction

__all__ = [
    "Rat",
    "as_rat",
    "binom_int",
    "MPoly",
    "BPoly",
    "DualElem",
    "PolyParseError",
    "binom_poly",
    "to_binomial",
    "from_binomial",
    "arith",
    "compose",
    "derivative",
    "fdiff",
    "fdiff_Y",
    "evaluate",
    "is_int_valued",
    "parse_poly",
    "parse_bpoly",
]


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def _lcm(values: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def binom_int(m: int, n: int) -> int:
    """C(m, n) for any integer m (negative allowed) and n >= 0."""
    if n < 0:
        return 0
    if m >= 0:
        return math.comb(m, n)
    return (-1) ** n * math.comb(n - m - 1, n)


@lru_cache(maxsize=None)
def _falling_coeffs(n: int) -> tuple[int, ...]:
    # X(X-1)...(X-n+1), low to high: signed Stirling numbers of the first kind
    coeffs = [1]
    for k in range(n):
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= k * c
        coeffs = nxt
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# multivariate polynomials


class MPoly:
    """Polynomial in named variables with Fraction coefficients."""

    __slots__ = ("variables", "_terms")

    def __init__(self, variables: Sequence[str] = ("X",), terms: Mapping | None = None):
        self.variables = tuple(variables)
        nv = len(self.variables)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != nv:
                raise ValueError(f"exponent vector {exps} does not match variables {self.variables}")
            c = as_rat(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self._terms = clean

    @property
    def terms(self) -> Mapping[tuple[int, ...], Fraction]:
        return MappingProxyType(self._terms)

    @classmethod
    def const(cls, c, variables: Sequence[str] = ("X",)) -> "MPoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name: str, variables: Sequence[str] | None = None) -> "MPoly":
        variables = tuple(variables) if variables is not None else (name,)
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exps: 1})

    # -- structure

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self.variables.index(name)
        return max((e[i] for e in self._terms), default=-1)

    def with_variables(self, variables: Sequence[str]) -> "MPoly":
        variables = tuple(variables)
        if variables == self.variables:
            return self
        idx = []
        for v in self.variables:
            if v not in variables:
                if any(e[self.variables.index(v)] for e in self._terms):
                    raise ValueError(f"cannot drop variable {v} that occurs")
                idx.append(None)
            else:
                idx.append(variables.index(v))
        out = {}
        for exps, c in self._terms.items():
            new = [0] * len(variables)
            for k, e in enumerate(exps):
                if idx[k] is not None:
                    new[idx[k]] = e
            out[tuple(new)] = c
        return MPoly(variables, out)

    def _align(self, other: "MPoly"):
        if self.variables == other.variables:
            return self, other
        merged = list(self.variables)
        merged += [v for v in other.variables if v not in merged]
        return self.with_variables(merged), other.with_variables(merged)

    def drop_unused(self) -> "MPoly":
        used = [v for i, v in enumerate(self.variables) if any(e[i] for e in self._terms)]
        return self.with_variables(used or self.variables[:1])

    # -- arithmetic

    def _coerce(self, other):
        if isinstance(other, MPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.const(other, self.variables)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self._align(other)
        out = dict(a._terms)
        for e, c in b._terms.items():
            out[e] = out.get(e, 0) + c
        return MPoly(a.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.variables, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return MPoly(self.variables, {e: c * other for e, c in self._terms.items()})
        if not isinstance(other, MPoly):
            return NotImplemented
        a, b = self._align(other)
        out: dict = {}
        for e1, c1 in a._terms.items():
            for e2, c2 in b._terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly(a.variables, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MPoly.const(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other, self.variables)
        if not isinstance(other, MPoly):
            return NotImplemented
        a, b = self._align(other)
        return a._terms == b._terms

    def __hash__(self):
        return hash(frozenset(self.drop_unused()._terms.items()))

    # -- calculus and substitution

    def derivative(self, name: str | None = None, r: int = 1) -> "MPoly":
        name = name or self.variables[0]
        i = self.variables.index(name)
        terms = self._terms
        for _ in range(r):
            out = {}
            for e, c in terms.items():
                if e[i]:
                    ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                    out[ne] = out.get(ne, 0) + c * e[i]
            terms = out
        return MPoly(self.variables, terms)

    def evaluate(self, values: Mapping[str, object] | Sequence):
        """Evaluate at numbers or any ring-like values supporting ``+``, ``*``, ``**``."""
        if not isinstance(values, Mapping):
            values = dict(zip(self.variables, values))
        vals = [values[v] for v in self.variables]
        total = 0
        for exps, c in self._terms.items():
            term = c
            for v, e in zip(vals, exps):
                if e:
                    term = term * v ** e
            total = term + total
        return total

    def __call__(self, *values):
        return self.evaluate(values)

    def substitute(self, mapping: Mapping[str, "MPoly"]) -> "MPoly":
        """Replace variables by polynomials; unmapped variables stay put."""
        images = {}
        target_vars: list[str] = []
        for v in self.variables:
            img = mapping.get(v, MPoly.var(v))
            images[v] = img
            target_vars += [w for w in img.variables if w not in target_vars]
        images = {v: img.with_variables(target_vars) for v, img in images.items()}
        total = MPoly.const(0, target_vars)
        cache: dict = {}
        for exps, c in self._terms.items():
            term = MPoly.const(c, target_vars)
            for v, e in zip(self.variables, exps):
                if e:
                    key = (v, e)
                    if key not in cache:
                        cache[key] = images[v] ** e
                    term = term * cache[key]
            total = total + term
        return total

    def __repr__(self):
        return f"MPoly({self.variables!r}, {dict(self._terms)!r})"

    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for exps in sorted(self._terms, key=lambda e: (sum(e), e)):
            c = self._terms[exps]
            mono = "*".join(
                (v if e == 1 else f"{v}^{e}") for v, e in zip(self.variables, exps) if e
            )
            pieces.append(_signed_term(c, mono))
        return _join_terms(pieces)


def _coeff_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _signed_term(c: Fraction, atom: str) -> tuple[bool, str]:
    neg = c < 0
    a = -c if neg else c
    if not atom:
        body = _coeff_str(a)
    elif a == 1:
        body = atom
    else:
        body = f"{_coeff_str(a)}*{atom}"
    return neg, body


def _join_terms(pieces) -> str:
    out = []
    for k, (neg, body) in enumerate(pieces):
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("-" if neg else "+") + body)
    return "".join(out)


def _univariate_values(f: MPoly, points: Iterable[int]) -> list[Fraction]:
    if len(f.variables) != 1:
        f = f.drop_unused()
        if len(f.variables) != 1:
            raise ValueError("expected a univariate polynomial")
    den = _lcm(c.denominator for c in f._terms.values())
    deg = f.degree()
    ints = [0] * (deg + 1)
    for (e,), c in f._terms.items():
        ints[e] = c.numerator * (den // c.denominator)
    out = []
    for k in points:
        acc = 0
        for c in reversed(ints):
            acc = acc * k + c
        out.append(Fraction(acc, den))
    return out


# ---------------------------------------------------------------------------
# binomial-basis polynomials


class BPoly:
    """``sum(coeffs[n] * C(X, n))`` with exact rational coordinates."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rat(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def basis(cls, n: int) -> "BPoly":
        return cls([0] * n + [1])

    @classmethod
    def x(cls) -> "BPoly":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "BPoly":
        return cls([c])

    @classmethod
    def from_mpoly(cls, f: MPoly) -> "BPoly":
        return to_binomial(f)

    def to_mpoly(self, var: str = "X") -> MPoly:
        return from_binomial(self, var)

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, n: int) -> Fraction:
        return self.coeffs[n] if 0 <= n < len(self.coeffs) else Fraction(0)

    def has_integral_coeffs(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def is_int_valued(self) -> bool:
        return is_int_valued(self)

    # -- arithmetic

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BPoly.const(other)
        if not isinstance(other, BPoly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return BPoly(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return BPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BPoly.const(other)
        if not isinstance(other, BPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return BPoly(c * other for c in self.coeffs)
        if not isinstance(other, BPoly):
            return NotImplemented
        return arith(self, other, "mul")

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = BPoly.const(1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BPoly.const(other)
        if not isinstance(other, BPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, a):
        return evaluate(self, a)

    def compose(self, g: "BPoly") -> "BPoly":
        return compose(self, g)

    def derivative(self, r: int = 1) -> "BPoly":
        return derivative(self, r)

    def fdiff(self, h) -> "BPoly":
        return fdiff(self, h)

    def value_at_int(self, m: int) -> Fraction:
        return sum((c * binom_int(m, n) for n, c in enumerate(self.coeffs)), Fraction(0))

    def __repr__(self):
        return f"BPoly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        pieces = [
            _signed_term(c, "" if n == 0 else f"C(X,{n})")
            for n, c in enumerate(self.coeffs)
            if c
        ]
        return _join_terms(pieces)


@lru_cache(maxsize=None)
def binom_poly(n: int, var: str = "X") -> MPoly:
    """``C(var, n) = var(var-1)...(var-n+1)/n!`` in the monomial basis."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    fact = math.factorial(n)
    return MPoly((var,), {(k,): Fraction(c, fact) for k, c in enumerate(_falling_coeffs(n))})


def to_binomial(f: MPoly) -> BPoly:
    """Newton forward-difference transform: coordinate n is the n-th difference at 0."""
    if f.is_zero():
        return BPoly()
    d = f.degree()
    return BPoly(forward_differences(_univariate_values(f, range(d + 1))))


def from_binomial(f: BPoly, var: str = "X") -> MPoly:
    terms: dict = {}
    for n, a in enumerate(f.coeffs):
        if not a:
            continue
        fact = math.factorial(n)
        for k, s in enumerate(_falling_coeffs(n)):
            if s:
                terms[(k,)] = terms.get((k,), 0) + a * Fraction(s, fact)
    return MPoly((var,), terms)


def _values(f: BPoly, points: Iterable) -> list:
    return [evaluate(f, a) for a in points]


def arith(f: BPoly, g, op: str, method: str = "monomial") -> BPoly:
    """Ring operations on ``BPoly``.

    ``op`` is one of ``add``, ``sub``, ``mul``, ``scale`` (``g`` a scalar for
    ``scale``).  Products go through the monomial basis unless
    ``method="values"``, which differences the pointwise products instead.
    """
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "scale":
        return BPoly(c * as_rat(g) for c in f.coeffs)
    if op != "mul":
        raise ValueError(f"unknown op {op!r}")
    if f.is_zero() or g.is_zero():
        return BPoly()
    if method == "values":
        d = f.degree() + g.degree()
        pts = range(d + 1)
        return BPoly(forward_differences([a * b for a, b in zip(_int_values(f, pts), _int_values(g, pts))]))
    if method != "monomial":
        raise ValueError(f"unknown method {method!r}")
    return to_binomial(from_binomial(f) * from_binomial(g))


def _int_values(f: BPoly, points: Iterable[int]) -> list[Fraction]:
    return [f.value_at_int(k) for k in points]


def compose(f: BPoly, g: BPoly) -> BPoly:
    """``f(g(X))``, computed from the values ``f(g(k))`` for ``k = 0..deg``."""
    if g.degree() <= 0:
        return BPoly([evaluate(f, g.coeff(0))])
    if f.degree() <= 0:
        return f
    d = f.degree() * g.degree()
    inner = _int_values(g, range(d + 1))
    vals = [f.value_at_int(v.numerator) if v.denominator == 1 else evaluate(f, v) for v in inner]
    return BPoly(forward_differences(vals))


def derivative(f: BPoly, r: int = 1) -> BPoly:
    if r < 0:
        raise ValueError("derivative order must be nonnegative")
    if r == 0 or f.is_zero():
        return f
    return to_binomial(from_binomial(f).derivative("X", r))


def fdiff_Y(f: BPoly) -> MPoly:
    """``(f(X+Y) - f(X)) / Y`` as a polynomial in X and Y."""
    m = from_binomial(f)
    shifted = m.substitute({"X": MPoly.var("X", ("X", "Y")) + MPoly.var("Y", ("X", "Y"))})
    diff = shifted - m.with_variables(("X", "Y"))
    out = {}
    for (ex, ey), c in diff.terms.items():
        # every surviving term carries a positive power of Y
        out[(ex, ey - 1)] = c
    return MPoly(("X", "Y"), out)


def fdiff(f: BPoly, h=1) -> BPoly:
    """Finite difference ``Delta_h f``; ``h = 0`` gives the derivative."""
    h = as_rat(h)
    if f.is_zero():
        return f
    if h == 0:
        return derivative(f, 1)
    d = f.degree()
    vals = [(evaluate(f, k + h) - f.value_at_int(k)) / h for k in range(d)]
    return BPoly(forward_differences(vals))


def evaluate(f: BPoly, a):
    """Evaluate ``f`` at a rational, an integer, or a ``DualElem``.

    Uses ``C(a, n+1) = C(a, n) * (a - n) / (n + 1)``, which only needs ring
    operations and exact division by integers.
    """
    if isinstance(a, int) or (isinstance(a, Fraction) and a.denominator == 1):
        return f.value_at_int(int(a))
    if isinstance(a, (str, float)):
        a = as_rat(a)
    total = None
    c = None
    for n, coef in enumerate(f.coeffs):
        c = (a - a + 1) if n == 0 else c * (a - (n - 1)) / n
        term = c * coef
        total = term if total is None else total + term
    if total is None:
        return (a - a) if isinstance(a, DualElem) else Fraction(0)
    return total


def is_int_valued(f: BPoly) -> bool:
    """Decide ``f(Z) <= Z`` from the values ``f(0), ..., f(deg f)``."""
    return all(v.denominator == 1 for v in _int_values(f, range(f.degree() + 1)))


# ---------------------------------------------------------------------------
# dual numbers


class DualElem:
    """``base + eps * eps_coeff`` with ``eps**2 = 0``."""

    __slots__ = ("base", "eps")

    def __init__(self, base, eps=0):
        self.base = base
        self.eps = eps

    def _parts(self, other):
        if isinstance(other, DualElem):
            return other.base, other.eps
        return other, 0

    def __add__(self, other):
        b, e = self._parts(other)
        return DualElem(self.base + b, self.eps + e)

    __radd__ = __add__

    def __neg__(self):
        return DualElem(-self.base, -self.eps)

    def __sub__(self, other):
        b, e = self._parts(other)
        return DualElem(self.base - b, self.eps - e)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b, e = self._parts(other)
        return DualElem(self.base * b, self.base * e + self.eps * b)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, DualElem):
            raise TypeError("division by a dual number is not supported")
        scalar = as_rat(scalar)
        return DualElem(self.base / scalar, self.eps / scalar)

    def __pow__(self, k: int):
        if k == 0:
            return DualElem(1, 0)
        # (a + b eps)^k = a^k + k a^(k-1) b eps
        return DualElem(self.base ** k, k * self.base ** (k - 1) * self.eps)

    def __eq__(self, other):
        b, e = self._parts(other)
        return self.base == b and self.eps == e

    def __hash__(self):
        return hash((self.base, self.eps))

    def __repr__(self):
        return f"DualElem({self.base!s}, {self.eps!s})"

    def __str__(self):
        return f"{self.base}+{self.eps}*eps"


# ---------------------------------------------------------------------------
# text grammar


class PolyParseError(ValueError):
    pass


_TOKEN = re.compile(r"C\(([XY]),(\d+)\)|(\d+)|([XY])|([-+*/^])")


def _tokenize(text: str):
    s = re.sub(r"\s+", "", text)
    pos = 0
    tokens = []
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            raise PolyParseError(f"unexpected input at {s[pos:]!r}")
        if m.group(1):
            tokens.append(("binom", m.group(1), int(m.group(2))))
        elif m.group(3):
            tokens.append(("int", int(m.group(3))))
        elif m.group(4):
            tokens.append(("var", m.group(4)))
        else:
            tokens.append(("op", m.group(5)))
        pos = m.end()
    if not tokens:
        raise PolyParseError("empty polynomial")
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise PolyParseError("unexpected end of input")
        self.i += 1
        return tok

    def is_op(self, sym):
        tok = self.peek()
        return tok is not None and tok[0] == "op" and tok[1] == sym

    def poly(self) -> MPoly:
        sign = 1
        if self.is_op("-") or self.is_op("+"):
            sign = -1 if self.take()[1] == "-" else 1
        total = self.term() * sign
        while self.peek() is not None:
            tok = self.take()
            if tok[0] != "op" or tok[1] not in "+-":
                raise PolyParseError(f"expected '+' or '-', got {tok!r}")
            t = self.term()
            total = total + t if tok[1] == "+" else total - t
        return total

    def term(self) -> MPoly:
        tok = self.peek()
        if tok is not None and tok[0] == "int":
            c = self.coeff()
            if self.is_op("*"):
                self.take()
                return self.atom_product() * c
            return MPoly.const(c, ("X", "Y"))
        return self.atom_product()

    def coeff(self) -> Fraction:
        num = self.take()[1]
        if self.is_op("/"):
            self.take()
            tok = self.take()
            if tok[0] != "int":
                raise PolyParseError("expected a denominator")
            if tok[1] == 0:
                raise PolyParseError("zero denominator")
            return Fraction(num, tok[1])
        return Fraction(num)

    def atom_product(self) -> MPoly:
        result = self.atom()
        while self.is_op("*"):
            self.take()
            result = result * self.atom()
        return result

    def atom(self) -> MPoly:
        tok = self.take()
        if tok[0] == "binom":
            return binom_poly(tok[2], tok[1]).with_variables(("X", "Y"))
        if tok[0] == "var":
            power = 1
            if self.is_op("^"):
                self.take()
                t = self.take()
                if t[0] != "int":
                    raise PolyParseError("expected an exponent")
                power = t[1]
            return MPoly.var(tok[1], ("X", "Y")) ** power
        raise PolyParseError(f"expected an atom, got {tok!r}")


def parse_poly(text: str) -> MPoly:
    """Parse the polynomial grammar into an ``MPoly`` in X (and Y if used)."""
    parser = _Parser(_tokenize(text))
    f = parser.poly()
    if not any(e[1] for e in f.terms):
        return f.with_variables(("X",))
    return f


def parse_bpoly(text: str) -> BPoly:
    f = parse_poly(text)
    if len(f.variables) != 1:
        raise PolyParseError("expected a polynomial in X only")
    return to_binomial(f)
