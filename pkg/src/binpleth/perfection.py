"""Frobenius, perfection and perfect closure for small rings of characteristic p.

``perfection_r(A, m)`` truncates the inverse limit of ``... -> A -> A``
(transition maps Frobenius) to chains ``(a_0, ..., a_{m-1})`` with
``a_i = a_{i+1}^p`` whose last entry lies in the image of ``F^{m-1}``.
Its size is ``|F^{m-1}(A)|``, so it stabilizes once the Frobenius images
stop shrinking.
"""

from __future__ import annotations

from dataclasses import dataclass

from binpleth.rings import FiniteRing, PolyQuotient, homs
from binpleth.reflect import SizeLimitError

__all__ = [
    "CharacteristicError",
    "frobenius",
    "frobenius_is_hom",
    "is_perfect",
    "ChainRing",
    "perfection_r",
    "perfection_sizes",
    "perfect_closure_l",
    "closure_step",
    "AdjunctionResult",
    "adjunction_check",
    "ADJUNCTION_LIMIT",
]

ADJUNCTION_LIMIT = 64
DEFAULT_CHAIN = 4


class CharacteristicError(ValueError):
    pass


def _prime_char(A: FiniteRing) -> int:
    p = A.char
    if A.char_primes() != [p]:
        raise CharacteristicError(f"{A.name} has characteristic {p}, not a prime")
    return p


def frobenius(A: FiniteRing) -> dict:
    p = _prime_char(A)
    return {a: A.pow(a, p) for a in A.elements()}


def frobenius_is_hom(A: FiniteRing) -> bool:
    F = frobenius(A)
    E = A.elements()
    return F[A.one] == A.one and all(
        F[A.add(x, y)] == A.add(F[x], F[y]) and F[A.mul(x, y)] == A.mul(F[x], F[y]) for x in E for y in E
    )


def is_perfect(A: FiniteRing) -> bool:
    """Frobenius is a bijection (exhaustive)."""
    return len(set(frobenius(A).values())) == A.size


class ChainRing(FiniteRing):
    """Frobenius-compatible chains of length ``m`` in ``A``."""

    def __init__(self, base: FiniteRing, m: int):
        if m < 1:
            raise ValueError("chain length must be at least 1")
        self.base = base
        self.m = m
        self.p = _prime_char(base)
        self.name = f"perf({base.name},{m})"

    @property
    def zero(self):
        return (self.base.zero,) * self.m

    @property
    def one(self):
        return (self.base.one,) * self.m

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        return tuple(self.base.mul(x, y) for x, y in zip(a, b))

    def from_int(self, k):
        return (self.base.from_int(k),) * self.m

    def _enumerate(self):
        A, p = self.base, self.p
        top = set(A.elements())
        for _ in range(self.m - 1):
            top = {A.pow(a, p) for a in top}
        out = []
        for last in sorted(top, key=repr):
            chain = [last]
            for _ in range(self.m - 1):
                chain.append(A.pow(chain[-1], p))
            out.append(tuple(reversed(chain)))
        return out

    def project(self, a):
        """First coordinate, the map to ``A``."""
        return a[0]

    def fmt(self, a):
        return "(" + ", ".join(self.base.fmt(x) for x in a) + ")"


def perfection_sizes(A: FiniteRing, mmax: int = 8) -> list[int]:
    return [ChainRing(A, m).size for m in range(1, mmax + 1)]


def perfection_r(A: FiniteRing, m: int | None = None) -> ChainRing:
    """Truncated perfection; with ``m=None`` the chain length grows from the
    default until two consecutive sizes agree."""
    _prime_char(A)
    if m is not None:
        return ChainRing(A, m)
    m = DEFAULT_CHAIN
    while ChainRing(A, m).size != ChainRing(A, m + 1).size:
        m += 1
    return ChainRing(A, m)


def perfect_closure_l(n: int, p: int, k: int) -> PolyQuotient:
    """Stage ``k`` for ``A = F_p[x]/(x^n)``: ``F_p[u]/(u^(n p^k))`` with ``x = u^(p^k)``."""
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    e = n * p**k
    var = "x" if k == 0 else "u"
    name = f"F{p}[{var}]/({var}^{e})" if e > 1 else f"F{p}[{var}]/({var})"
    return PolyQuotient(p, [0] * e + [1], name=name)


def closure_step(n: int, p: int, k: int) -> dict:
    """The inclusion of stage ``k`` into stage ``k+1`` (``u -> u'^p``)."""
    S, T = perfect_closure_l(n, p, k), perfect_closure_l(n, p, k + 1)
    t = T.pow(_gen(T), p)
    out = {}
    for a in S.elements():
        img, power = T.zero, T.one
        for c in a:
            img = T.add(img, T.mul(T.from_int(c), power))
            power = T.mul(power, t)
        out[a] = img
    return out


def _gen(R: PolyQuotient):
    return R.t if R.deg > 1 else R.zero


@dataclass
class AdjunctionResult:
    B: str
    A: str
    chain_length: int
    homs_into_perfection: int
    homs_into_A: int
    bijective: bool

    @property
    def ok(self) -> bool:
        return self.bijective and self.homs_into_perfection == self.homs_into_A


def adjunction_check(B: FiniteRing, A: FiniteRing, m: int | None = None) -> AdjunctionResult:
    """``Hom(B, perf A) -> Hom(B, A)`` by first-coordinate projection is a bijection."""
    for R in (A, B):
        if R.size > ADJUNCTION_LIMIT:
            raise SizeLimitError(f"|{R.name}| = {R.size} exceeds {ADJUNCTION_LIMIT}")
    if _prime_char(A) != _prime_char(B):
        raise CharacteristicError("A and B have different characteristics")
    if not is_perfect(B):
        raise ValueError(f"{B.name} is not perfect")
    P = perfection_r(A, m)
    upstairs = homs(B, P)
    downstairs = homs(B, A)
    projected = {tuple(sorted((b, P.project(phi[b])) for b in B.elements())) for phi in upstairs}
    direct = {tuple(sorted(phi.items())) for phi in downstairs}
    bij = len(projected) == len(upstairs) and projected == direct
    return AdjunctionResult(B.name, A.name, P.m, len(upstairs), len(downstairs), bij)
