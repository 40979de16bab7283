"""Build script: compiles the Jacobi eigensolver kernel when Cython and a C
compiler are available.  The package works without it (pure-Python fallback),
so any failure here is non-fatal for the install."""

from setuptools import Extension, setup

try:
    import numpy as np
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "qmarginals._jacobi",
                ["src/qmarginals/_jacobi.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
