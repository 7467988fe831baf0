"""Build the optional Cython simplex kernel.

The package works without it: ``gzz.lp`` falls back to the NumPy kernel
when the extension cannot be imported.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("GZZ_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "gzz.lp._simplex_ext",
                    ["src/gzz/lp/_simplex_ext.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
