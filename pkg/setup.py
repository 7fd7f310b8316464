# Builds the compiled stage-1 kernels for color equalization. If Cython or a
# C compiler is unavailable the install still succeeds and the package falls
# back to the pure-numpy kernels at import time.
import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "chromaforge._ace_kernel",
                ["src/chromaforge/_ace_kernel.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
