import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("BINPLETH_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("binpleth._ckernels", ["src/binpleth/_ckernels.pyx"])],
            compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
        )

setup(ext_modules=ext_modules)
