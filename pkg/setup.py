"""Build script for the optional compiled decoder core.

The package works without the extension (a pure-Python backend is selected at
import time), so a failed compile only costs speed. Build is skipped entirely
when Cython is unavailable.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "polarkit.kernels._ckernels",
                ["src/polarkit/kernels/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
else:
    extensions = []

setup(ext_modules=extensions)
