"""Hermite normal form and lattices in Q^d.

A lattice is kept as an integer basis matrix together with a common
denominator ``scale``; the vectors of the lattice are ``row / scale``.
Every equality test goes through the row-style Hermite normal form:
echelon shape, positive pivots, and entries above each pivot reduced into
``[0, pivot)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

__all__ = [
    "IntMat",
    "IntLattice",
    "hnf",
    "lattice_from_congruences",
    "member",
    "compare",
    "span_member",
    "det",
]


def _lcm(values) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


@dataclass(frozen=True)
class IntMat:
    entries: tuple[tuple[int, ...], ...]
    cols: int

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMat":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            if not rows:
                raise ValueError("column count needed for an empty matrix")
            cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        return cls(rows, cols)

    @property
    def rows(self) -> int:
        return len(self.entries)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def to_json(self) -> str:
        return json.dumps(
            {"rows": self.rows, "cols": self.cols, "entries": [[str(x) for x in r] for r in self.entries]}
        )

    @classmethod
    def from_json(cls, text: str) -> "IntMat":
        data = json.loads(text)
        m = cls.of([[int(x) for x in r] for r in data["entries"]], data["cols"])
        if m.rows != data["rows"]:
            raise ValueError("row count does not match entries")
        return m

    def __matmul__(self, other: "IntMat") -> "IntMat":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMat.of(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.entries], other.cols
        )


def hnf(M: IntMat | Sequence[Sequence[int]]) -> tuple[IntMat, IntMat]:
    """Return ``(H, U)`` with ``H = U @ M``, ``U`` unimodular, ``H`` in HNF.

    Zero rows of ``H`` collect at the bottom.
    """
    if not isinstance(M, IntMat):
        M = IntMat.of(M)
    n, m = M.rows, M.cols
    A = [list(r) for r in M.entries]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def addmul(dst, src, q):
        # row[dst] -= q * row[src]
        if q:
            A[dst] = [a - q * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    r = 0
    for c in range(m):
        if r == n:
            break
        while True:
            nz = [i for i in range(r, n) if A[i][c]]
            if not nz:
                break
            k = min(nz, key=lambda i: abs(A[i][c]))
            swap(r, k)
            done = True
            for i in range(r + 1, n):
                if A[i][c]:
                    addmul(i, r, A[i][c] // A[r][c])
                    if A[i][c]:
                        done = False
            if done:
                break
        if not A[r][c]:
            continue
        if A[r][c] < 0:
            A[r] = [-x for x in A[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            addmul(i, r, A[i][c] // A[r][c])
        r += 1
    return IntMat.of(A, m), IntMat.of(U, n)


def _pivot_cols(H: IntMat) -> list[int]:
    out = []
    for row in H.entries:
        for j, x in enumerate(row):
            if x:
                out.append(j)
                break
    return out


def _solve_echelon(H: IntMat, v: Sequence[int]) -> list[int] | None:
    """Integer ``c`` with ``c @ H == v`` for ``H`` in echelon form, else None."""
    v = list(v)
    coords = []
    pivots = _pivot_cols(H)
    for row, j in zip(H.entries, pivots):
        if v[j] % row[j]:
            return None
        q = v[j] // row[j]
        coords.append(q)
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    if any(v):
        return None
    return coords + [0] * (H.rows - len(coords))


def det(rows: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-free Bareiss elimination."""
    den = _lcm(Fraction(x).denominator for r in rows for x in r)
    A = [[int(Fraction(x) * den) for x in r] for r in rows]
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    d = A[n - 1][n - 1] if n else 1
    return Fraction(sign * d, den ** n)


class IntLattice:
    """Lattice in Q^d generated by linearly independent rows.

    ``basis`` keeps the rows as given (scaled to integers); ``canonical`` is
    the HNF, which decides equality.
    """

    __slots__ = ("ambient_dim", "scale", "basis", "_hnf", "_U")

    def __init__(self, rows: Sequence[Sequence], ambient_dim: int | None = None, scale: int | None = None):
        rows = [[Fraction(x) for x in r] for r in rows]
        if ambient_dim is None:
            if not rows:
                raise ValueError("ambient dimension needed for an empty basis")
            ambient_dim = len(rows[0])
        if any(len(r) != ambient_dim for r in rows):
            raise ValueError("basis rows do not match the ambient dimension")
        if scale is None:
            scale = _lcm(x.denominator for r in rows for x in r)
        self.ambient_dim = ambient_dim
        self.scale = scale
        scaled = []
        for r in rows:
            sr = [x * scale for x in r]
            if any(x.denominator != 1 for x in sr):
                raise ValueError("scale does not clear the basis denominators")
            scaled.append([int(x) for x in sr])
        self.basis = IntMat.of(scaled, ambient_dim)
        H, U = hnf(self.basis)
        if any(not any(r) for r in H.entries):
            raise ValueError("basis rows are linearly dependent")
        self._hnf, self._U = H, U

    @classmethod
    def from_generators(cls, gens: Sequence[Sequence], ambient_dim: int) -> "IntLattice":
        """Lattice spanned by possibly dependent generators."""
        gens = [[Fraction(x) for x in g] for g in gens]
        scale = _lcm(x.denominator for g in gens for x in g)
        H, _ = hnf(IntMat.of([[int(x * scale) for x in g] for g in gens], ambient_dim) if gens else IntMat((), ambient_dim))
        rows = [[Fraction(x, scale) for x in r] for r in H.entries if any(r)]
        return cls(rows, ambient_dim)

    @property
    def rank(self) -> int:
        return self.basis.rows

    def is_full_rank(self) -> bool:
        return self.rank == self.ambient_dim

    def canonical(self) -> IntMat:
        """HNF of the lattice at its minimal common denominator."""
        rows = self.canonical_rows()
        scale = _lcm(x.denominator for r in rows for x in r)
        return IntMat.of([[int(x * scale) for x in r] for r in rows], self.ambient_dim)

    def canonical_rows(self) -> list[list[Fraction]]:
        return [[Fraction(x, self.scale) for x in r] for r in self._hnf.entries]

    def basis_rows(self) -> list[list[Fraction]]:
        return [[Fraction(x, self.scale) for x in r] for r in self.basis.entries]

    def covolume(self) -> Fraction:
        if not self.is_full_rank():
            raise ValueError("covolume needs a full-rank lattice")
        d = Fraction(1)
        for row, j in zip(self._hnf.entries, _pivot_cols(self._hnf)):
            d *= row[j]
        return d / Fraction(self.scale) ** self.ambient_dim

    def coordinates(self, v: Sequence) -> list[int] | None:
        v = [Fraction(x) for x in v]
        if len(v) != self.ambient_dim:
            raise ValueError("dimension mismatch")
        sv = [x * self.scale for x in v]
        if any(x.denominator != 1 for x in sv):
            return None
        ch = _solve_echelon(self._hnf, [int(x) for x in sv])
        if ch is None:
            return None
        # v = ch @ H = (ch @ U) @ basis
        U = self._U.entries
        return [sum(ch[i] * U[i][j] for i in range(len(ch))) for j in range(self.rank)]

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def __eq__(self, other):
        if not isinstance(other, IntLattice):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())

    def __repr__(self):
        return f"IntLattice(dim={self.ambient_dim}, scale={self.scale}, hnf={self._hnf.tolist()})"


def lattice_from_congruences(ambient_dim: int, constraints: Sequence[Sequence], scale: int | None = None) -> IntLattice:
    """``{a in (1/D) Z^d : <c, a> in Z for every constraint c}``.

    ``D`` defaults to the lcm of the constraint denominators.  The result is
    the dual of the Z-span of the constraints together with ``D * e_i``.
    """
    cons = [[Fraction(x) for x in c] for c in constraints]
    if any(len(c) != ambient_dim for c in cons):
        raise ValueError("constraint length does not match the ambient dimension")
    if scale is None:
        scale = _lcm(x.denominator for c in cons for x in c)
    gens = cons + [[Fraction(scale if i == j else 0) for j in range(ambient_dim)] for i in range(ambient_dim)]
    dual_of = IntLattice.from_generators(gens, ambient_dim)
    B = dual_of.canonical_rows()
    inv = _inverse(B)
    # rows of (B^-1)^T
    dual_rows = [[inv[j][i] for j in range(ambient_dim)] for i in range(ambient_dim)]
    return IntLattice.from_generators(dual_rows, ambient_dim)


def _inverse(A: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(A)
    M = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(A)]
    for c in range(n):
        p = next(i for i in range(c, n) if M[i][c])
        M[c], M[p] = M[p], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return [r[n:] for r in M]


def member(L: IntLattice, v: Sequence) -> list[int] | None:
    """Integer coordinates of ``v`` on ``L.basis`` or None when ``v`` is not in ``L``."""
    return L.coordinates(v)


def span_member(generators: Sequence[Sequence], v: Sequence) -> list[int] | None:
    """Integer ``c`` with ``sum(c_i * g_i) == v``; generators may be dependent."""
    gens = [[Fraction(x) for x in g] for g in generators]
    v = [Fraction(x) for x in v]
    d = len(v)
    if any(len(g) != d for g in gens):
        raise ValueError("dimension mismatch")
    if not gens:
        return [] if not any(v) else None
    scale = _lcm(x.denominator for g in gens + [v] for x in g)
    H, U = hnf(IntMat.of([[int(x * scale) for x in g] for g in gens], d))
    nonzero = IntMat.of([r for r in H.entries if any(r)], d)
    ch = _solve_echelon(nonzero, [int(x * scale) for x in v]) if nonzero.rows else (None if any(v) else [])
    if ch is None:
        return None
    ch = ch + [0] * (H.rows - len(ch))
    return [sum(ch[i] * U.entries[i][j] for i in range(H.rows)) for j in range(len(gens))]


def compare(L1: IntLattice, L2: IntLattice) -> tuple[str, Fraction | None]:
    """Relative position of two full-rank lattices.

    Returns ``("equal", 1)``, ``("subset", index)`` when ``L1`` is a proper
    sublattice of ``L2``, ``("superset", index)`` for the reverse, or
    ``("incomparable", None)``.
    """
    if L1.ambient_dim != L2.ambient_dim:
        raise ValueError("lattices live in different dimensions")
    if not (L1.is_full_rank() and L2.is_full_rank()):
        raise ValueError("compare needs full-rank lattices")
    in2 = all(r in L2 for r in L1.basis_rows())
    in1 = all(r in L1 for r in L2.basis_rows())
    if in1 and in2:
        return "equal", Fraction(1)
    if in2:
        return "subset", L1.covolume() / L2.covolume()
    if in1:
        return "superset", L2.covolume() / L1.covolume()
    return "incomparable", None
