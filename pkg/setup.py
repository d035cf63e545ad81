"""Build script: compiles the optional Cython extension for the hot kernels.

The package is fully functional without the extension (a pure-Python twin
is selected at import); if Cython or a C compiler is unavailable the build
falls back to a pure-Python install.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/deltashell/_core_c.pyx"],
        language_level=3,
        compiler_directives={"boundscheck": False, "cdivision": True},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
