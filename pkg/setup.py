"""Build the optional compiled kernel extension.

The package works without it (a pure-Python fallback is selected at import
time); build the extension for fast monotone-family enumeration, weight/pivot
counting, and branch-and-bound search:

    pip install -e . --no-build-isolation

Set EKRLAB_SKIP_EXT=1 to skip compiling the extension entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("EKRLAB_SKIP_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "ekrlab._kernels._core",
                    ["src/ekrlab/_kernels/_core.pyx"],
                    extra_compile_args=["-O2"],
                )
            ],
            compiler_directives={
                "language_level": 3,
                "boundscheck": False,
                "wraparound": False,
            },
        )
    except ImportError:
        print("Cython not available; building without the compiled kernels.")

setup(ext_modules=ext_modules)
