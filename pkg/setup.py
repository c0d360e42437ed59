import os

import numpy as np
from setuptools import Extension, setup

# FRAUDKIT_NO_EXT=1 installs the pure-Python fallback only.
ext_modules = []
if not os.environ.get("FRAUDKIT_NO_EXT"):
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "fraudkit._ckernels",
                ["src/fraudkit/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                # no fast-math / fp contraction: kernels must match the fallback bit for bit
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "initializedcheck": False,
        },
    )

setup(ext_modules=ext_modules)
