"""Build the optional Cython kernel core.

If Cython or a C compiler is unavailable the package still installs and
``tvdw.kernels`` falls back to the pure-Python implementation.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("TVDW_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "tvdw._ckernels",
                    ["src/tvdw/_ckernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
