import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# No -ffast-math: the floating-point filters in the predicate kernel rely on
# IEEE-754 rounding for their error bounds.
extensions = [
    Extension(
        "pdx._kernel._core",
        ["src/pdx/_kernel/_core.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )
)
