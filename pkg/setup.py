"""Build the optional Cython core.

The package works without the extension (a pure-Python implementation of the
same kernels is selected at import time), so a failed compile only costs speed.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "sh22osc._kernels._core",
                ["src/sh22osc/_kernels/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
