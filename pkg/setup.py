"""Build hook: compile the optional Cython kernel when possible.

The package is pure Python by contract; the compiled kernel is a drop-in
twin of ``blocksmith._kernel_py`` selected at import time. A missing
compiler or missing Cython must never break installation.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/blocksmith/_kernel_c.pyx"],
        language_level="3",
    )
except Exception:
    pass

setup(ext_modules=ext_modules)
