import sys

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("dighom._kernel", ["src/dighom/_kernel.pyx"])],
        compiler_directives={
            "language_level": sys.version_info[0],
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    # No Cython: install the pure-Python package; dighom.search falls back.
    pass

setup(ext_modules=ext_modules)
