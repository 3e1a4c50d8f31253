"""Composition on Int(Z) and the relations it satisfies with the co-operations.

The composite ``P (.) P`` is never built as a presented algebra; its
defining relations are checked directly through ``compose``, ``coadd``
and ``comul``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from binpleth.biring import TBPoly, coadd, comul
from binpleth.core import BPoly, as_rat, compose, evaluate
from binpleth.intlattice import span_member
from binpleth.ivp import RingFamily, graded_basis, parse_family
from binpleth.reflect import forced_hom
from binpleth.report import Report

__all__ = [
    "relation_check",
    "associativity_check",
    "idempotence_witness",
    "NonInvertibleError",
    "invert",
    "plethystic_units",
    "Decomposition",
    "decompose_tensor",
    "weakly_composite_check",
    "RELATIONS",
]

RELATIONS = ("sum", "product", "constant", "coaddition", "comultiplication", "evaluation")


def _require_int(*polys: BPoly):
    for f in polys:
        if not f.has_integral_coeffs():
            raise ValueError(f"{f} is not in Int(Z)")


def _fold(T: TBPoly, g: BPoly, h: BPoly) -> BPoly:
    """``sum c_ij (C(X,i) o g) (C(X,j) o h)`` over the terms of ``T``."""
    left: dict[int, BPoly] = {}
    right: dict[int, BPoly] = {}
    total = BPoly()
    for (i, j), c in T.items():
        if i not in left:
            left[i] = compose(BPoly.basis(i), g)
        if j not in right:
            right[j] = compose(BPoly.basis(j), h)
        total = total + left[i] * right[j] * c
    return total


def relation_check(f: BPoly, g: BPoly, h: BPoly, c=0) -> Report:
    """The six composition relations, exactly."""
    _require_int(f, g, h)
    c = as_rat(c)
    if c.denominator != 1:
        raise ValueError("the constant must be an integer")
    rep = Report("plethory-relations")
    checks = {
        "sum": compose(f + g, h) == compose(f, h) + compose(g, h),
        "product": compose(f * g, h) == compose(f, h) * compose(g, h),
        "constant": compose(BPoly.const(c), h) == BPoly.const(c),
        "coaddition": compose(f, g + h) == _fold(coadd(f), g, h),
        "comultiplication": compose(f, g * h) == _fold(comul(f), g, h),
        "evaluation": compose(f, BPoly.const(c)) == BPoly.const(evaluate(f, c)),
    }
    for name in RELATIONS:
        rep.record(checks[name], {"relation": name, "f": str(f), "g": str(g), "h": str(h), "c": str(c)})
    return rep


def associativity_check(f: BPoly, g: BPoly, h: BPoly) -> bool:
    return compose(compose(f, g), h) == compose(f, compose(g, h))


_DEFAULT_PROBES = {
    "Z": [0, 1, -2, 3],
    "Z_(2)": [Fraction(1, 3), Fraction(2, 3), Fraction(-1, 5)],
    "Z_(3)": [Fraction(1, 2), Fraction(5, 4)],
    "Z[1/6]": [Fraction(1, 2), Fraction(1, 3), Fraction(5, 6)],
}


def idempotence_witness(N: int, probes: dict | None = None) -> Report:
    """Unit laws for composition, plus forced-value uniqueness into torsion-free targets.

    Uniqueness is exercised by computing each forced image with two
    different denominator clearings; they must agree.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    rep = Report("idempotence")
    e = BPoly.x()
    for n in range(N + 1):
        f = BPoly.basis(n)
        rep.record(compose(e, f) == f and compose(f, e) == f, {"unit-law": n})
    for target, points in (probes or _DEFAULT_PROBES).items():
        for a in points:
            first = forced_hom(a, "int", N, target)
            ok = first.ok
            if ok:
                a = as_rat(a)
                for n, img in enumerate(first.images):
                    D = 2 * _factorial(n)
                    alt = (BPoly.basis(n) * D)(a) / D
                    ok = ok and alt == img
            rep.record(ok, {"target": target, "a": str(a)})
    return rep


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


# ---------------------------------------------------------------------------
# plethystic units


class NonInvertibleError(ValueError):
    pass


def invert(f: BPoly) -> BPoly:
    """Compositional inverse inside Int(Z)."""
    _require_int(f)
    if f.degree() != 1:
        raise NonInvertibleError(f"{f} has degree {f.degree()}; only degree-1 elements can be units")
    b, a = f.coeff(0), f.coeff(1)
    g = BPoly([-b / a, 1 / a])
    if not g.has_integral_coeffs():
        raise NonInvertibleError(f"the inverse {g} is not integer-valued")
    return g


def plethystic_units(d: int, window: int = 3) -> list[BPoly]:
    """Units of ``(Int(Z), o)`` with degree <= d and coefficients in ``[-window, window]``.

    Degrees multiply under composition, so a unit has degree 1; the search
    runs over ``aX + b`` in the window and keeps those with an inverse.
    """
    if d < 1:
        return []
    out = []
    for a in range(-window, window + 1):
        if a == 0:
            continue
        for b in range(-window, window + 1):
            f = BPoly([b, a])
            try:
                g = invert(f)
            except NonInvertibleError:
                continue
            if compose(f, g) == BPoly.x() and compose(g, f) == BPoly.x():
                out.append(f)
    return out


# ---------------------------------------------------------------------------
# tensor decomposability


@dataclass
class Decomposition:
    found: bool
    coords: dict | None
    Dmax: int
    note: str = ""

    def expand(self, basis: Sequence[BPoly]) -> TBPoly:
        out = TBPoly()
        for (i, j), c in (self.coords or {}).items():
            out = out + TBPoly.outer(basis[i], basis[j]) * c
        return out


def decompose_tensor(F: TBPoly, basis: Sequence[BPoly], Dmax: int) -> Decomposition:
    """Integer coordinates of ``F`` on ``{g_i(X) g_j(Y)}``, if any exist."""
    if any(g.degree() > Dmax for g in basis):
        raise ValueError("basis element exceeds Dmax")
    note = f"no decomposition with factor degree <= {Dmax}"
    if any(max(idx) > Dmax for idx in F.terms):
        return Decomposition(False, None, Dmax, note)
    size = Dmax + 1
    pairs = [(i, j) for i in range(len(basis)) for j in range(len(basis))]
    gens = []
    for i, j in pairs:
        T = TBPoly.outer(basis[i], basis[j]).terms
        gens.append([T.get((a, b), Fraction(0)) for a in range(size) for b in range(size)])
    target = F.terms
    v = [target.get((a, b), Fraction(0)) for a in range(size) for b in range(size)]
    coords = span_member(gens, v) if gens else (None if any(v) else [])
    if coords is None:
        return Decomposition(False, None, Dmax, note)
    return Decomposition(True, {pair: c for pair, c in zip(pairs, coords) if c}, Dmax)


def weakly_composite_check(family, d: int, Dmax: int | None = None) -> Report:
    """Decompose ``f(X+Y)`` and ``f(XY)`` over the family, for basis elements up to degree d."""
    fam = family if isinstance(family, RingFamily) else parse_family(family)
    Dmax = 2 * d if Dmax is None else Dmax
    basis = list(graded_basis(fam, Dmax).elements)
    rep = Report(f"weakly-composite {fam}")
    for f in graded_basis(fam, d).elements:
        for name, op in (("coadd", coadd), ("comul", comul)):
            res = decompose_tensor(op(f), basis, Dmax)
            rep.record(res.found, {"f": str(f), "degree": f.degree(), "op": name, "note": res.note})
    return rep
