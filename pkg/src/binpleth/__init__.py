"""Exact computations with the ring Int(Z) of integer-valued polynomials.

Modules: ``core`` (polynomials in monomial and binomial bases),
``intlattice`` (HNF lattices), ``biring`` (co-operations), ``plethory``
(composition), ``ivp`` (ring families), ``rings`` (small finite rings),
``witt``, ``reflect``, ``perfection`` and ``cli``.
"""

from binpleth._backend import BACKEND
from binpleth.core import BPoly, DualElem, MPoly, compose, from_binomial, parse_bpoly, parse_poly, to_binomial

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BPoly",
    "DualElem",
    "MPoly",
    "compose",
    "from_binomial",
    "parse_bpoly",
    "parse_poly",
    "to_binomial",
    "__version__",
]
