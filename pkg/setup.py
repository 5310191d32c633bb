"""Build script for the compiled decoder kernel.

The package works without the extension (a NumPy fallback is selected at
import time); building it just makes turbo decoding much faster.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "qostbc._kernels._bcjr",
                ["src/qostbc/_kernels/_bcjr.pyx"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
