"""Co-operations of Int(Z) on the tensor binomial basis.

``coadd(f)`` is ``f(X+Y)`` and ``comul(f)`` is ``f(XY)``, both written as
``sum c_ij C(X,i) C(Y,j)``.  Every expansion goes through a grid of values
followed by bivariate forward differences, so integrality of the output
can be read off the coefficients.

``TBPoly`` also carries tensors of higher arity; coassociativity and
co-distributivity need three factors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping

from binpleth._backend import forward_differences, forward_differences_2d
from binpleth.core import BPoly, as_rat, binom_int, evaluate

__all__ = [
    "TBPoly",
    "coadd",
    "comul",
    "cozero",
    "counit",
    "antipode",
    "colinear",
    "counits",
    "Counits",
    "ringlike_check",
    "verify_biring_axioms",
    "AxiomReport",
    "BIRING_AXIOMS",
    "corrupt_coadd_basis",
]

_VARS = "XYZWVU"


class TBPoly:
    """``sum c[idx] * C(X, idx[0]) * C(Y, idx[1]) * ...`` with Fraction coefficients."""

    __slots__ = ("arity", "_coeffs")

    def __init__(self, coeffs: Mapping[tuple[int, ...], object] | None = None, arity: int = 2):
        self.arity = arity
        clean = {}
        for idx, c in (coeffs or {}).items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != arity:
                raise ValueError(f"index {idx} does not have arity {arity}")
            c = as_rat(c)
            if c:
                clean[idx] = c
        self._coeffs = clean

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._coeffs)

    def items(self):
        return sorted(self._coeffs.items())

    @classmethod
    def outer(cls, *factors: BPoly) -> "TBPoly":
        """Tensor product ``f_1 (x) f_2 (x) ...``."""
        out: dict = {(): Fraction(1)}
        for f in factors:
            out = {
                idx + (n,): c * a
                for idx, c in out.items()
                for n, a in enumerate(f.coeffs)
                if a
            }
        return cls(out, len(factors))

    def has_integral_coeffs(self) -> bool:
        return all(c.denominator == 1 for c in self._coeffs.values())

    def __add__(self, other: "TBPoly") -> "TBPoly":
        if not isinstance(other, TBPoly):
            return NotImplemented
        if other.arity != self.arity:
            raise ValueError("arity mismatch")
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, 0) + c
        return TBPoly(out, self.arity)

    def __neg__(self):
        return TBPoly({k: -c for k, c in self._coeffs.items()}, self.arity)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return TBPoly({k: c * scalar for k, c in self._coeffs.items()}, self.arity)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TBPoly):
            return NotImplemented
        return self.arity == other.arity and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.arity, frozenset(self._coeffs.items())))

    def swap(self, i: int = 0, j: int = 1) -> "TBPoly":
        def sw(idx):
            idx = list(idx)
            idx[i], idx[j] = idx[j], idx[i]
            return tuple(idx)

        return TBPoly({sw(k): c for k, c in self._coeffs.items()}, self.arity)

    def evaluate(self, *points):
        total = Fraction(0)
        for idx, c in self._coeffs.items():
            term = c
            for p, n in zip(points, idx):
                if isinstance(p, int):
                    term *= binom_int(p, n)
                else:
                    term *= evaluate(BPoly.basis(n), p)
            total += term
        return total

    def to_json(self) -> str:
        if self.arity != 2:
            raise ValueError("the JSON form covers two-factor tensors")
        return json.dumps({"terms": [{"i": i, "j": j, "c": str(c)} for (i, j), c in self.items()]})

    @classmethod
    def from_json(cls, text: str) -> "TBPoly":
        data = json.loads(text)
        out: dict = {}
        for t in data["terms"]:
            key = (int(t["i"]), int(t["j"]))
            out[key] = out.get(key, 0) + Fraction(t["c"])
        return cls(out, 2)

    def __repr__(self):
        return f"TBPoly({ {k: str(c) for k, c in self.items()} }, arity={self.arity})"

    def __str__(self):
        if not self._coeffs:
            return "0"
        out = []
        for idx, c in self.items():
            atoms = "*".join(f"C({_VARS[k]},{n})" for k, n in enumerate(idx) if n)
            neg = c < 0
            a = -c if neg else c
            cs = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
            body = atoms if a == 1 and atoms else (f"{cs}*{atoms}" if atoms else cs)
            out.append(("-" if neg else ("+" if out else "")) + body)
        return "".join(out)


def _grid_expand(f: BPoly, combine: Callable[[int, int], int]) -> TBPoly:
    if f.is_zero():
        return TBPoly()
    d = f.degree()
    cache: dict[int, Fraction] = {}

    def value(k):
        if k not in cache:
            cache[k] = f.value_at_int(k)
        return cache[k]

    grid = [[value(combine(i, j)) for j in range(d + 1)] for i in range(d + 1)]
    diffs = forward_differences_2d(grid)
    return TBPoly({(i, j): diffs[i][j] for i in range(d + 1) for j in range(d + 1)})


def coadd(f: BPoly) -> TBPoly:
    """``f(X + Y)`` on the basis ``C(X,i) C(Y,j)``."""
    return _grid_expand(f, lambda i, j: i + j)


def comul(f: BPoly) -> TBPoly:
    """``f(X * Y)`` on the basis ``C(X,i) C(Y,j)``."""
    return _grid_expand(f, lambda i, j: i * j)


def cozero(f: BPoly) -> Fraction:
    return f.value_at_int(0)


def counit(f: BPoly) -> Fraction:
    return f.value_at_int(1)


def antipode(f: BPoly) -> BPoly:
    """``f(-X)`` re-expanded on the binomial basis."""
    return BPoly(forward_differences([f.value_at_int(-k) for k in range(f.degree() + 1)]))


def colinear(c) -> Callable[[BPoly], Fraction]:
    """The co-linear structure at ``c``: the evaluation map ``f -> f(c)``."""
    c = as_rat(c)
    return lambda f: evaluate(f, c)


@dataclass(frozen=True)
class Counits:
    cozero: Fraction
    counit: Fraction
    antipode: BPoly
    colinear: Callable[[object], Fraction]


def counits(f: BPoly) -> Counits:
    return Counits(cozero(f), counit(f), antipode(f), lambda c: colinear(c)(f))


def ringlike_check(f: BPoly, probes: Iterable[int] = (0, 1, -1, 2, -2, 3)) -> bool:
    one = BPoly.const(1)
    if coadd(f) != TBPoly.outer(f, one) + TBPoly.outer(one, f):
        return False
    if comul(f) != TBPoly.outer(f, f):
        return False
    return all(colinear(c)(f) == c for c in probes)


# ---------------------------------------------------------------------------
# tensor plumbing for the axiom checks

@lru_cache(maxsize=None)
def _coadd_basis(n: int) -> TBPoly:
    return coadd(BPoly.basis(n))


@lru_cache(maxsize=None)
def _comul_basis(n: int) -> TBPoly:
    return comul(BPoly.basis(n))


@lru_cache(maxsize=None)
def _antipode_basis(n: int) -> BPoly:
    return antipode(BPoly.basis(n))


@lru_cache(maxsize=None)
def _product_basis(a: int, b: int) -> BPoly:
    return BPoly.basis(a) * BPoly.basis(b)


def _expand_factor(T: TBPoly, k: int, op: Callable[[int], TBPoly]) -> TBPoly:
    """Apply a two-output co-operation to factor ``k`` (arity grows by one)."""
    out: dict = {}
    for idx, c in T._coeffs.items():
        for (a, b), d in op(idx[k])._coeffs.items():
            key = idx[:k] + (a, b) + idx[k + 1:]
            out[key] = out.get(key, 0) + c * d
    return TBPoly(out, T.arity + 1)


def _map_factor(T: TBPoly, k: int, op: Callable[[int], BPoly]) -> TBPoly:
    out: dict = {}
    for idx, c in T._coeffs.items():
        for n, d in enumerate(op(idx[k]).coeffs):
            if d:
                key = idx[:k] + (n,) + idx[k + 1:]
                out[key] = out.get(key, 0) + c * d
    return TBPoly(out, T.arity)


def _contract(T: TBPoly, k: int, functional: Callable[[int], Fraction]) -> TBPoly:
    out: dict = {}
    for idx, c in T._coeffs.items():
        v = functional(idx[k])
        if v:
            key = idx[:k] + idx[k + 1:]
            out[key] = out.get(key, 0) + c * v
    return TBPoly(out, T.arity - 1)


def _merge_factors(T: TBPoly, k: int, l: int) -> TBPoly:
    """Multiply factor ``l`` into factor ``k`` (``k < l``)."""
    out: dict = {}
    for idx, c in T._coeffs.items():
        prod = _product_basis(*sorted((idx[k], idx[l])))
        for n, d in enumerate(prod.coeffs):
            if d:
                key = list(idx)
                key[k] = n
                del key[l]
                key = tuple(key)
                out[key] = out.get(key, 0) + c * d
    return TBPoly(out, T.arity - 1)


def _as_bpoly(T: TBPoly) -> BPoly:
    if T.arity != 1:
        raise ValueError("expected a one-factor tensor")
    d = max((i for (i,) in T._coeffs), default=-1)
    return BPoly(T._coeffs.get((n,), 0) for n in range(d + 1))


def corrupt_coadd_basis(n: int) -> TBPoly:
    """Coaddition with the ``1 (x) C(Y,n)`` term dropped for ``n >= 2``.

    A deliberately broken co-operation used as a negative control.
    """
    T = _coadd_basis(n)
    if n < 2:
        return T
    return TBPoly({k: c for k, c in T._coeffs.items() if k != (0, n)})


BIRING_AXIOMS = (
    "coassociativity+",
    "coassociativity*",
    "cocommutativity+",
    "cocommutativity*",
    "counit+",
    "counit*",
    "antipode",
    "codistributivity",
    "cozero-absorption",
    "beta-compatibility",
)


@dataclass
class AxiomReport:
    degree: int
    failures: dict[str, list[int]] = field(default_factory=lambda: {a: [] for a in BIRING_AXIOMS})

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())

    def first_failure(self, axiom: str) -> int | None:
        fails = self.failures[axiom]
        return min(fails) if fails else None

    def as_dict(self) -> dict:
        return {
            "property": "biring-axioms",
            "cases": (self.degree + 1) * len(BIRING_AXIOMS),
            "failures": [{"axiom": a, "n": n} for a in BIRING_AXIOMS for n in self.failures[a]],
        }


def verify_biring_axioms(
    N: int,
    coadd_basis: Callable[[int], TBPoly] | None = None,
    comul_basis: Callable[[int], TBPoly] | None = None,
    beta_probes: Iterable[int] = (-2, -1, 0, 1, 2, 3),
) -> AxiomReport:
    """Check the biring laws exactly on ``C(X, n)`` for ``0 <= n <= N``.

    The co-operations can be swapped out (``coadd_basis``/``comul_basis``
    take a basis index and return a tensor) to run negative controls.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    dplus = coadd_basis or _coadd_basis
    dtimes = comul_basis or _comul_basis
    cz = lambda n: Fraction(int(n == 0))  # C(0, n)
    cu = lambda n: Fraction(int(n <= 1))  # C(1, n)
    probes = list(beta_probes)
    report = AxiomReport(N)
    fail = report.failures

    for n in range(N + 1):
        f = BPoly.basis(n)
        fT = TBPoly({(n,): 1}, 1)
        P, M = dplus(n), dtimes(n)

        if _expand_factor(P, 0, dplus) != _expand_factor(P, 1, dplus):
            fail["coassociativity+"].append(n)
        if _expand_factor(M, 0, dtimes) != _expand_factor(M, 1, dtimes):
            fail["coassociativity*"].append(n)
        if P.swap() != P:
            fail["cocommutativity+"].append(n)
        if M.swap() != M:
            fail["cocommutativity*"].append(n)
        if _contract(P, 0, cz) != fT or _contract(P, 1, cz) != fT:
            fail["counit+"].append(n)
        if _contract(M, 0, cu) != fT or _contract(M, 1, cu) != fT:
            fail["counit*"].append(n)

        unit = TBPoly({(0,): cz(n)}, 1)
        left = _merge_factors(_map_factor(P, 0, _antipode_basis), 0, 1)
        right = _merge_factors(_map_factor(P, 1, _antipode_basis), 0, 1)
        if left != unit or right != unit:
            fail["antipode"].append(n)

        # f(X(Y+Z)) against sum over coadd of f_1(XY) f_2(XZ)
        lhs = _expand_factor(M, 1, dplus)
        rhs = _merge_factors(_expand_factor(_expand_factor(P, 0, dtimes), 2, dtimes), 0, 2)
        if lhs != rhs:
            fail["codistributivity"].append(n)

        if _contract(M, 0, cz) != unit:
            fail["cozero-absorption"].append(n)

        ok = True
        for a in probes:
            for b in probes:
                if P.evaluate(a, b) != f.value_at_int(a + b) or M.evaluate(a, b) != f.value_at_int(a * b):
                    ok = False
        ok = ok and all(colinear(c)(BPoly.x()) == c for c in probes)
        if not ok:
            fail["beta-compatibility"].append(n)
    return report
