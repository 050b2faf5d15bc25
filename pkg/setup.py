"""Builds the optional compiled kernel; the package falls back to numpy without it."""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("SKETCHMATCH_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools.extension import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "sketchmatch._ckernels",
                    ["src/sketchmatch/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": 3,
                "boundscheck": False,
                "wraparound": False,
                "initializedcheck": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
