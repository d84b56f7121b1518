"""Build script: compiles the optional Cython kernel.

If Cython or a C compiler is unavailable the package installs anyway and
falls back to the numpy kernel at import time (see prbandits.kernels).
"""
import sys

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "prbandits._prkernel",
                ["src/prbandits/_prkernel.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover
    print(f"prbandits: skipping compiled kernel ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
