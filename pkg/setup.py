"""Build script: compiles the optional fast-stepping extension.

The package is fully functional without the extension (a vectorized numpy
backend is selected at import time when the compiled module is absent).
Set GRAVCAT_LIV_NO_EXT=1 to skip compilation entirely.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("GRAVCAT_LIV_NO_EXT"):
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/gravcat_liv/_native.pyx",
        language_level=3,
        compiler_directives={"boundscheck": False, "wraparound": False},
    )
    for ext in ext_modules:
        ext.include_dirs.append(np.get_include())
        # keep IEEE semantics so numpy and native backends agree closely
        ext.extra_compile_args = ["-O2", "-ffp-contract=off"]

setup(ext_modules=ext_modules)
