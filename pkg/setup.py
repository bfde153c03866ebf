import numpy
from setuptools import Extension, setup

# The compiled kernel is optional: if Cython or a C compiler is missing the
# package falls back to the pure NumPy backend at import time.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "pcmkit.kernels._core",
                ["src/pcmkit/kernels/_core.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
