import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = [
    Extension(
        "roomtone.fdtd._stencil",
        ["src/roomtone/fdtd/_stencil.pyx"],
        include_dirs=[np.get_include()],
        # -ffp-contract=off keeps the compiled kernel bit-identical to the
        # NumPy reference kernel (no FMA contraction).
        extra_compile_args=["-O3", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
    if cythonize
    else [],
)
