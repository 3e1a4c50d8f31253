"""Pick the compiled kernels when they are built, else the Python ones.

Set ``BINPLETH_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("BINPLETH_PURE_PYTHON"):
    from binpleth import _pykernels as kernels

    BACKEND = "python"
else:
    try:
        from binpleth import _ckernels as kernels

        BACKEND = "cython"
    except ImportError:
        from binpleth import _pykernels as kernels

        BACKEND = "python"

forward_differences = kernels.forward_differences
forward_differences_2d = kernels.forward_differences_2d
binom_mod_p = kernels.binom_mod_p
binom_row_mod_p = kernels.binom_row_mod_p
bilinear_mod = kernels.bilinear_mod
poly_mulmod = kernels.poly_mulmod

__all__ = [
    "BACKEND",
    "forward_differences",
    "forward_differences_2d",
    "binom_mod_p",
    "binom_row_mod_p",
    "bilinear_mod",
    "poly_mulmod",
]
