"""Build script for the compiled statevector kernels.

The package works without the extension (a numpy fallback is selected at
import time), but the compiled core is what makes ensemble-scale training
fast, so the build treats a compile failure as an error rather than
silently shipping the slow path.
"""

from setuptools import setup
from setuptools.extension import Extension

from Cython.Build import cythonize

extensions = [
    Extension(
        "entgen._core",
        ["src/entgen/_core.pyx"],
    )
]

setup(ext_modules=cythonize(extensions, language_level="3"))
