"""Build hook: compiles the closure kernel when Cython and a C toolchain
are available, and degrades to the pure-Python backend otherwise."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    import numpy

    ext_modules = cythonize(
        ["src/galheight/_closure.pyx"],
        compiler_directives={"language_level": "3"},
    )
    include_dirs = [numpy.get_include()]
except Exception:
    include_dirs = []

setup(
    ext_modules=ext_modules,
    include_dirs=include_dirs,
)
