import numpy
from Cython.Build import cythonize
from setuptools import Extension, setup

# The compiled permanent kernel is optional: if the toolchain is missing the
# package falls back to the NumPy implementation selected at import time.
extensions = [
    Extension(
        "bosonic_moments._kernels._permanents",
        ["src/bosonic_moments/_kernels/_permanents.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
        optional=True,
    )
]

setup(ext_modules=cythonize(extensions, language_level=3))
