"""Build script: compiles the optional Cython permanent kernel.

The package works without the extension (a numpy fallback is selected at
import time); the build therefore marks the extension as optional so that
installation never fails on a machine without a C compiler.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "modeweaver._kernels._ryser",
                ["src/modeweaver/_kernels/_ryser.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
    for ext in ext_modules:
        ext.optional = True
except ImportError:
    pass

setup(ext_modules=ext_modules)
