"""Reflective algebras at desk scale.

Maps out of an integer-valued polynomial ring into a torsion-free target
are forced: if ``D g`` has integer monomial coefficients then the image of
``g`` must be ``(D g)(a) / D``.  Torsion targets lose that uniqueness, and
the finite-ring classifier here decides the quasi-binomial condition two
ways.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from binpleth.core import BPoly, MPoly, as_rat, compose, from_binomial, parse_bpoly
from binpleth.intlattice import IntLattice
from binpleth.ivp import RingFamily, graded_basis, parse_family, primes_upto
from binpleth.rings import FiniteRing, galois_field, homs
from binpleth.witt import PadicApprox, eval_hom

__all__ = [
    "Target",
    "parse_target",
    "TorsionTargetError",
    "SizeLimitError",
    "ForcedHom",
    "forced_hom",
    "quasi_binomial_check",
    "residue_embed_check",
    "TorsionWitness",
    "torsion_uniqueness_demo",
    "WLower",
    "w_lower",
    "WUpper",
    "w_upper",
]

RESIDUE_EMBED_LIMIT = 4096


class TorsionTargetError(TypeError):
    """Forced values need a torsion-free target."""


class SizeLimitError(ValueError):
    pass


def _prime_factors(n: int) -> frozenset[int]:
    return frozenset(p for p in primes_upto(abs(n)) if n % p == 0)


@dataclass(frozen=True)
class Target:
    """A torsion-free subring of Q: ``Z``, ``Z[1/m]`` or ``Z_(p)``.

    ``inverted`` lists primes allowed in denominators; ``local`` marks
    ``Z_(p)``, where every prime except ``p`` is allowed.
    """

    inverted: frozenset[int] = frozenset()
    local: int | None = None

    def contains(self, x) -> bool:
        den = Fraction(x).denominator
        if self.local is not None:
            return den % self.local != 0
        for p in self.inverted:
            while den % p == 0:
                den //= p
        return den == 1

    def __str__(self):
        if self.local is not None:
            return f"Z_({self.local})"
        if not self.inverted:
            return "Z"
        return f"Z[1/{math.prod(sorted(self.inverted))}]"


def parse_target(text: str) -> tuple[Target, ...]:
    """``Z``, ``Z[1/6]``, ``Z_(2)`` and products such as ``ZxZ[1/2]``."""
    out = []
    for part in text.replace(" ", "").split("x"):
        if part == "Z":
            out.append(Target())
        elif m := re.fullmatch(r"Z\[1/(\d+)\]", part):
            out.append(Target(_prime_factors(int(m[1]))))
        elif m := re.fullmatch(r"Z_\((\d+)\)", part):
            p = int(m[1])
            if p not in primes_upto(p):
                raise ValueError(f"{p} is not prime")
            out.append(Target(local=p))
        else:
            raise ValueError(f"unrecognised target {part!r}")
    return tuple(out)


@dataclass
class ForcedHom:
    point: tuple[Fraction, ...]
    target: tuple[Target, ...]
    images: list = field(default_factory=list)
    obstruction: tuple[int, object] | None = None

    @property
    def ok(self) -> bool:
        return self.obstruction is None


def _denominator(g: BPoly) -> int:
    return math.lcm(*(c.denominator for c in from_binomial(g).terms.values()), 1)


def forced_hom(a, family="int", N: int = 8, target="Z") -> ForcedHom:
    """The only possible images of the family's basis under ``X -> a``.

    ``a`` is a rational (or a tuple of rationals for a product target).
    Each image is computed as ``(D g)(a) / D`` and must land in the target.
    """
    if isinstance(target, FiniteRing):
        raise TorsionTargetError(
            f"{target} has torsion; forced values are not unique there, use quasi_binomial_check"
        )
    tgt = parse_target(target) if isinstance(target, str) else tuple(target)
    point = tuple(as_rat(x) for x in a) if isinstance(a, (tuple, list)) else (as_rat(a),)
    if len(point) != len(tgt):
        raise ValueError("point and target have different numbers of factors")
    result = ForcedHom(point, tgt)
    for x, T in zip(point, tgt):
        if not T.contains(x):
            result.obstruction = (-1, x)
            return result
    fam = family if isinstance(family, RingFamily) else parse_family(family)
    for g in graded_basis(fam, N).elements:
        D = _denominator(g)
        Dg = from_binomial(g) * D
        vals = tuple(Dg.evaluate({"X": x}) / D for x in point)
        for v, T in zip(vals, tgt):
            if not T.contains(v):
                result.obstruction = (g.degree(), v)
                return result
        result.images.append(vals if len(vals) > 1 else vals[0])
    return result


# ---------------------------------------------------------------------------
# classifiers


def quasi_binomial_check(A: FiniteRing, p: int | None = None) -> bool:
    """``a^p - a`` lies in ``pA`` for all ``a`` (all primes dividing char A by default)."""
    primes = [p] if p is not None else A.char_primes()
    for q in primes:
        pA = A.ideal_multiple(q)
        if any(A.sub(A.pow(a, q), a) not in pA for a in A.elements()):
            return False
    return True


def residue_embed_check(A: FiniteRing, p: int) -> bool:
    """Is ``A/pA -> F_p^{Hom(A, F_p)}`` injective?"""
    if A.size > RESIDUE_EMBED_LIMIT:
        raise SizeLimitError(f"|A| = {A.size} exceeds {RESIDUE_EMBED_LIMIT}")
    Fp = galois_field(p)
    maps = homs(A, Fp)
    kernel = {a for a in A.elements() if all(phi[a] == 0 for phi in maps)}
    return kernel == set(A.ideal_multiple(p))


@dataclass
class TorsionWitness:
    p: int
    alpha: int
    beta: int
    agree_on_X: bool
    degree: int
    values: tuple[int, int]
    F: BPoly
    F_of_pX: MPoly
    identity_holds: bool
    F_at_zero: Fraction
    forced_nonzero: list[int]

    @property
    def ok(self) -> bool:
        return self.agree_on_X and self.values[0] != self.values[1] and self.identity_holds and self.F_at_zero == 0


def torsion_uniqueness_demo(p: int, m: int = 2) -> TorsionWitness:
    """Two maps ``Int(Z) -> F_p`` with the same image of ``X``.

    Also checks ``F(pX) = p^(p-1) X^p - X`` for ``F = (X^p - X)/p`` and
    lists the nonzero ``a`` in ``Z/p`` (all killed by ``p``) for which
    ``p^(p-1) a^p - a`` is nonzero, i.e. where a reflective structure
    would be contradictory.
    """
    if m < 2:
        raise ValueError("need m >= 2 so that alpha and alpha + p are distinct residues")
    a, b = PadicApprox(p, m, 1), PadicApprox(p, m, 1 + p)
    x = BPoly.x()
    agree = eval_hom(a, x) == eval_hom(b, x)
    n, va, vb = 0, 0, 0
    for n in range(p**m):
        va, vb = eval_hom(a, BPoly.basis(n)), eval_hom(b, BPoly.basis(n))
        if va != vb:
            break
    X = MPoly.var("X")
    F = BPoly.from_mpoly((X**p - X) * Fraction(1, p))
    FpX = from_binomial(compose(F, BPoly.from_mpoly(X * p)))
    expected = X**p * p ** (p - 1) - X
    forced = [c for c in range(1, p) if (p ** (p - 1) * c**p - c) % p]
    return TorsionWitness(
        p, a.residue, b.residue, agree, n, (va, vb), F, FpX, FpX == expected, F.value_at_int(0), forced
    )


# ---------------------------------------------------------------------------
# w_R and w^R


@dataclass
class WLower:
    ring: str
    certificates: list[ForcedHom]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.certificates)


def w_lower(m: int, family="int", N: int = 8, probes: Iterable | None = None) -> WLower:
    """``Z[1/m]`` is its own largest reflective subring; certify it at sample points."""
    if m < 1:
        raise ValueError("m must be positive")
    primes = sorted(_prime_factors(m))
    if probes is None:
        probes = [Fraction(1, q) for q in primes] + ([Fraction(m - 1, m)] if m > 1 else [0, 1, -1, 3])
    target = "Z" if m == 1 else f"Z[1/{m}]"
    certs = [forced_hom(a, family, N, target) for a in probes]
    return WLower(target, certs)


@dataclass
class WUpper:
    scalars: Target
    lattice: IntLattice | None
    degree: int
    stable: bool
    steps: int

    @property
    def diagonal(self) -> tuple[Fraction, ...] | None:
        """Minimal positive leading coefficient per degree (0 where nothing has that degree)."""
        if self.lattice is None:
            return None
        d = self.degree
        rev = IntLattice.from_generators([list(reversed(r)) for r in self.lattice.basis_rows()], d + 1)
        diag = [Fraction(0)] * (d + 1)
        for r in rev.canonical_rows():
            col = next(i for i, x in enumerate(r) if x)
            diag[d - col] = r[col]
        return tuple(diag)

    def description(self) -> str:
        if self.lattice is None:
            return str(self.scalars)
        state = "stable" if self.stable else "partial"
        return f"{self.scalars}-algebra, degree <= {self.degree} diagonal {list(map(str, self.diagonal))} ({state})"


def _as_bpoly(g) -> BPoly:
    if isinstance(g, BPoly):
        return g
    if isinstance(g, str):
        return parse_bpoly(g)
    return BPoly.const(as_rat(g))


def w_upper(generators: Sequence, family="int", N: int = 6, steps: int = 10) -> WUpper:
    """Close the ring generated by ``generators`` under the family's basis.

    Rational constants ``u/v`` generate ``Z[1/v]``, which is already closed.
    Polynomial generators are tracked as a lattice in binomial coordinates
    up to degree ``N``; each step substitutes every current basis element
    into every family basis polynomial, then closes under products, keeping
    whatever stays within degree ``N``.
    """
    gens = [_as_bpoly(g) for g in generators]
    consts = [g for g in gens if g.degree() <= 0]
    polys = [g for g in gens if g.degree() > 0]
    inverted = frozenset().union(*(_prime_factors(g.coeff(0).denominator) for g in consts))
    scalars = Target(inverted)
    if not polys:
        return WUpper(scalars, None, N, True, 0)
    if inverted:
        raise ValueError("mixing polynomial generators with non-integral constants is not supported")
    fam = family if isinstance(family, RingFamily) else parse_family(family)
    fbasis = graded_basis(fam, N).elements

    def vec(g):
        return [g.coeff(i) for i in range(N + 1)]

    def span(elts):
        return IntLattice.from_generators([vec(g) for g in elts if g.degree() <= N], N + 1)

    current = [BPoly.const(1)] + [g for g in polys if g.degree() <= N]
    L = span(current)
    for step in range(1, steps + 1):
        basis = [BPoly(r) for r in L.basis_rows()]
        new = list(basis)
        for a in basis:
            da = max(a.degree(), 0)
            for f in fbasis:
                if f.degree() * da <= N:
                    new.append(compose(f, a))
        # ring closure within the degree window
        while True:
            Lnew = span(new)
            b = [BPoly(r) for r in Lnew.basis_rows()]
            prods = [x * y for i, x in enumerate(b) for y in b[i:] if x.degree() + y.degree() <= N]
            L2 = span(list(b) + prods)
            if L2 == Lnew:
                break
            new = [BPoly(r) for r in L2.basis_rows()]
        if Lnew == L:
            return WUpper(scalars, L, N, True, step)
        L = Lnew
    return WUpper(scalars, L, N, False, steps)
