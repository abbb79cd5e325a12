"""Optional build of the compiled kernel extension.

The package runs without it (a numpy reference backend is selected at
import time), but the compiled kernels are markedly faster for the conv,
pooling, recurrent and IIR inner loops.

    pip install cython numpy        # one-time
    python setup.py build_ext --inplace

Verify with:
    python -c "from strokescreen.nn import kernels; print(kernels.active_backend())"
"""

from setuptools import setup

try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [
            Extension(
                "strokescreen.nn._kernels",
                ["src/strokescreen/nn/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
