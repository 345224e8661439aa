"""Build script: compiles the optional Cython kernel extension.

If no C toolchain is available the build falls back to a pure-python
install; rieszlab.kernels selects the numpy backend at import time.
"""

import sys

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/rieszlab/_kernels.pyx",
        language_level=3,
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )
    include_dirs = [numpy.get_include()]
except ImportError:
    ext_modules = []
    include_dirs = []
    print("cython/numpy unavailable at build time; skipping compiled kernels",
          file=sys.stderr)

setup(
    ext_modules=ext_modules,
    include_dirs=include_dirs,
)
