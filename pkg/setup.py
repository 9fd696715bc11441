import os

from setuptools import Extension, setup

# The compiled kernels are an optional speedup: the package falls back to the
# pure-Python implementations at import time when the extension is missing.
# Set GRAPHSEARCH_SKIP_EXT=1 to build without the extension.
ext_modules = []
if not os.environ.get("GRAPHSEARCH_SKIP_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize

        extensions = [
            Extension(
                "graphsearch._kernels._fast",
                ["src/graphsearch/_kernels/_fast.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ]
        ext_modules = cythonize(
            extensions,
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
