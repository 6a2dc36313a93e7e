"""Build script: compiles the optional fast kernel extension when Cython and a
C toolchain are available; the package falls back to the pure-Python kernels
otherwise, so a failed extension build is never fatal."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/quasifolds/_kernels/_fast.pyx"],
        language_level=3,
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
